#include "hma/refine.hpp"

#include <algorithm>
#include <sstream>

#include "hma/complete.hpp"
#include "hma/flatten.hpp"

namespace hma {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};

[[noreturn]] void violated(const RuleApplication& app, const std::string& condition) {
    throw RuleConditionViolated(std::string(rule_name(app)) + ": " + condition);
}

void require_input(const Hma& h, const RuleApplication& app) {
    if (has_errors(check_context_conditions(h, Strictness::strict))) {
        violated(app, "input document '" + h.name() + "' fails strict context conditions");
    }
}

void require_declared(const Hma& h, const RuleApplication& app, const StateId& s) {
    if (!h.states().contains(s)) violated(app, "state '" + s.name + "' is not declared");
}

Hma apply(const Hma& h, const RemoveInitial& rule, const RuleApplication& app) {
    require_declared(h, app, rule.state);
    if (!h.initial().contains(rule.state)) violated(app, "state '" + rule.state.name + "' is not initial");
    if (h.initial().size() < 2) violated(app, "at least one other initial state must remain");
    auto initial = h.initial();
    initial.erase(rule.state);
    return Hma(h.name(), h.states(), h.containment(), h.messages(), h.transitions(), std::move(initial));
}

Hma apply(const Hma& h, const RemoveUnreachable& rule, const RuleApplication& app) {
    const auto& s = rule.state;
    require_declared(h, app, s);
    Hierarchy hier(h);
    if (!hier.is_basic(s)) violated(app, "state '" + s.name + "' is not basic");
    if (h.initial().contains(s)) violated(app, "state '" + s.name + "' is initial");
    if (reachable_states(flatten(h)).contains(s)) {
        violated(app, "state '" + s.name + "' is reachable from the initial states");
    }
    // removing the last child of a composite would turn it into a new basic state
    for (const auto& parent : hier.parents(s)) {
        const auto remaining = std::ranges::count_if(h.containment(), [&](const Containment& c) {
            return c.parent == parent && c.child != s;
        });
        if (remaining == 0) violated(app, "state '" + s.name + "' is the only substate of '" + parent.name + "'");
    }

    auto states = h.states();
    states.erase(s);
    std::set<Containment> containment;
    for (const auto& c : h.containment()) {
        if (c.child != s && c.parent != s) containment.insert(c);
    }
    std::set<Transition> transitions;
    for (const auto& t : h.transitions()) {
        if (t.source != s && t.target != s) transitions.insert(t);
    }
    Hma out(h.name(), std::move(states), std::move(containment), h.messages(), std::move(transitions), h.initial());
    // Chaos completion targets every state, so unreachable states still carry
    // specification behavior. Dropping a transition into s must not leave the
    // source without a reaction, or chaos would add traces.
    const auto before = partial_pairs(flatten(h));
    for (const auto& [state, input] : partial_pairs(flatten(out))) {
        if (!before.contains({state, input})) {
            violated(app, "removing '" + s.name + "' leaves '" + state.name + "' without a reaction to '" + input.name + "'");
        }
    }
    return out;
}

Hma apply(const Hma& h, const SplitState& rule, const RuleApplication& app) {
    const auto& s = rule.state;
    require_declared(h, app, s);
    if (!Hierarchy(h).is_basic(s)) violated(app, "state '" + s.name + "' is not basic");
    for (const auto* fresh : {&rule.first, &rule.second}) {
        if (!is_valid_identifier(fresh->name)) violated(app, "'" + fresh->name + "' is not a valid state name");
        if (h.states().contains(*fresh)) violated(app, "fresh name '" + fresh->name + "' is already a state");
    }
    if (rule.first == rule.second) violated(app, "the two fresh names must differ");

    const std::vector<StateId> copies{rule.first, rule.second};
    auto replace = [&](const StateId& id) { return id == s ? copies : std::vector<StateId>{id}; };

    auto states = h.states();
    states.erase(s);
    states.insert(copies.begin(), copies.end());

    std::set<Containment> containment;
    for (const auto& c : h.containment()) {
        for (const auto& child : replace(c.child)) containment.insert(Containment{child, c.parent});
    }

    std::set<Transition> transitions;
    for (const auto& t : h.transitions()) {
        for (const auto& source : replace(t.source)) {
            for (const auto& target : replace(t.target)) transitions.insert(Transition{source, t.input, t.output, target});
        }
    }

    std::set<StateId> initial;
    for (const auto& i : h.initial()) {
        for (const auto& r : replace(i)) initial.insert(r);
    }
    return Hma(h.name(), std::move(states), std::move(containment), h.messages(), std::move(transitions),
               std::move(initial));
}

}  // namespace

std::string to_string(const RefinementVerdict& v) {
    if (v.relation == Relation::refines_up_to_depth) return "refines-up-to-depth " + std::to_string(v.depth);
    return "refuted: " + (v.counterexample ? to_string(*v.counterexample) : std::string("?"));
}

RefinementVerdict check_refinement(const Hma& refiner, const Hma& refined, std::size_t depth, const Caps& caps) {
    require_context_conditions(refiner, Strictness::strict);
    require_context_conditions(refined, Strictness::strict);
    if (refiner.messages() != refined.messages()) {
        throw AlphabetMismatch("'" + refiner.name() + "' and '" + refined.name() + "' have different message alphabets");
    }
    const SemanticsOptions options{Strictness::strict, caps};
    const auto lower = semantics_spec(refiner, depth, options);
    const auto upper = semantics_spec(refined, depth, options);
    const auto subset = trace_subset(lower, upper);
    if (subset.holds) return {Relation::refines_up_to_depth, depth, std::nullopt};
    return {Relation::refuted, depth, subset.witness};
}

std::string_view rule_name(const RuleApplication& app) {
    return std::visit(overloaded{
                          [](const RemoveInitial&) { return std::string_view("remove_initial"); },
                          [](const RemoveUnreachable&) { return std::string_view("remove_unreachable"); },
                          [](const SplitState&) { return std::string_view("split_state"); },
                      },
                      app);
}

std::string to_string(const RuleApplication& app) {
    std::string out(rule_name(app));
    std::visit(overloaded{
                   [&](const RemoveInitial& r) { out += " " + r.state.name; },
                   [&](const RemoveUnreachable& r) { out += " " + r.state.name; },
                   [&](const SplitState& r) { out += " " + r.state.name + " " + r.first.name + " " + r.second.name; },
               },
               app);
    return out;
}

RuleApplication make_rule(std::string_view name, const std::vector<std::string>& args) {
    auto expect = [&](std::size_t count) {
        if (args.size() != count) {
            throw RuleConditionViolated(std::string(name) + ": expected " + std::to_string(count) + " argument(s), got " +
                                        std::to_string(args.size()));
        }
    };
    if (name == "remove_initial") {
        expect(1);
        return RemoveInitial{StateId{args[0]}};
    }
    if (name == "remove_unreachable") {
        expect(1);
        return RemoveUnreachable{StateId{args[0]}};
    }
    if (name == "split_state") {
        expect(3);
        return SplitState{StateId{args[0]}, StateId{args[1]}, StateId{args[2]}};
    }
    throw RuleConditionViolated("unknown rule '" + std::string(name) + "'");
}

std::vector<RuleApplication> parse_rule_script(std::string_view text) {
    std::vector<RuleApplication> out;
    std::istringstream lines{std::string(text)};
    std::string line;
    std::size_t number = 0;
    while (std::getline(lines, line)) {
        ++number;
        if (auto comment = line.find("//"); comment != std::string::npos) line.erase(comment);
        std::istringstream words(line);
        std::string name;
        if (!(words >> name)) continue;
        std::vector<std::string> args;
        for (std::string word; words >> word;) args.push_back(word);
        try {
            out.push_back(make_rule(name, args));
        } catch (const RuleConditionViolated& e) {
            throw RuleConditionViolated("line " + std::to_string(number) + ": " + e.what());
        }
    }
    return out;
}

Hma apply_rule(const Hma& h, const RuleApplication& app) {
    require_input(h, app);
    auto result = std::visit([&](const auto& rule) { return apply(h, rule, app); }, app);
    if (has_errors(check_context_conditions(result, Strictness::strict))) {
        violated(app, "result fails strict context conditions");
    }
    return result;
}

RefinementVerdict verify_rule_soundness(const Hma& h, const RuleApplication& app, std::size_t depth, const Caps& caps) {
    return check_refinement(apply_rule(h, app), h, depth, caps);
}

}  // namespace hma
