#include "hma/core.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <tuple>

#include "hma/flatten.hpp"

namespace hma {

MalformedDocument::MalformedDocument(const std::string& what, std::vector<Diagnostic> diagnostics)
    : Error(what), diagnostics_(std::move(diagnostics)) {}

namespace {

constexpr std::array<std::string_view, 5> keywords = {"hma", "messages", "state", "initial", "trans"};

void require_identifier(const std::string& name, std::string_view what) {
    if (!is_valid_identifier(name)) {
        throw MalformedDocument("invalid " + std::string(what) + " name '" + name + "'");
    }
}

void require_state(const std::set<StateId>& states, const StateId& s, std::string_view where) {
    if (!states.contains(s)) {
        throw MalformedDocument("undeclared state '" + s.name + "' in " + std::string(where));
    }
}

void require_message(const std::set<Message>& messages, const Message& m, std::string_view where) {
    if (!messages.contains(m)) {
        throw MalformedDocument("undeclared message '" + m.name + "' in " + std::string(where));
    }
}

void validate_flat_parts(const std::set<StateId>& states,
                         const std::set<Message>& messages,
                         const std::set<Transition>& transitions,
                         const std::set<StateId>& initial) {
    for (const auto& s : states) require_identifier(s.name, "state");
    for (const auto& m : messages) require_identifier(m.name, "message");
    for (const auto& t : transitions) {
        const auto where = "transition " + to_string(t);
        require_state(states, t.source, where);
        require_state(states, t.target, where);
        require_message(messages, t.input, where);
        if (t.output) require_message(messages, *t.output, where);
    }
    for (const auto& s : initial) require_state(states, s, "initial states");
}

// Drops edges implied by longer containment chains. Only meaningful when acyclic.
std::set<Containment> transitive_reduction(const std::set<StateId>& states, const std::set<Containment>& edges) {
    std::map<StateId, std::set<StateId>> parents;
    for (const auto& e : edges) parents[e.child].insert(e.parent);

    // ancestors via DFS over the raw edges
    std::map<StateId, std::set<StateId>> ancestors;
    for (const auto& s : states) {
        std::vector<StateId> stack(parents[s].begin(), parents[s].end());
        auto& acc = ancestors[s];
        while (!stack.empty()) {
            auto top = stack.back();
            stack.pop_back();
            if (!acc.insert(top).second) continue;
            for (const auto& p : parents[top]) stack.push_back(p);
        }
        if (acc.contains(s)) return edges;
    }

    std::set<Containment> reduced;
    for (const auto& e : edges) {
        const bool implied = std::ranges::any_of(parents[e.child], [&](const StateId& q) {
            return q != e.parent && ancestors[q].contains(e.parent);
        });
        if (!implied) reduced.insert(e);
    }
    return reduced;
}

}  // namespace

bool is_keyword(std::string_view text) {
    return std::ranges::find(keywords, text) != keywords.end();
}

bool is_valid_identifier(std::string_view text) {
    if (text.empty() || !std::isalpha(static_cast<unsigned char>(text.front()))) return false;
    const bool chars_ok = std::ranges::all_of(text, [](char c) {
        return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
    });
    return chars_ok && !is_keyword(text);
}

std::string to_string(const OutputLabel& output) {
    return output ? output->name : std::string("eps");
}

std::string to_string(const Transition& t) {
    return "(" + t.source.name + "," + t.input.name + "," + to_string(t.output) + "," + t.target.name + ")";
}

Hma::Hma(std::string name,
         std::set<StateId> states,
         std::set<Containment> containment,
         std::set<Message> messages,
         std::set<Transition> transitions,
         std::set<StateId> initial)
    : name_(std::move(name)),
      states_(std::move(states)),
      messages_(std::move(messages)),
      transitions_(std::move(transitions)),
      initial_(std::move(initial)) {
    require_identifier(name_, "automaton");
    validate_flat_parts(states_, messages_, transitions_, initial_);
    for (const auto& c : containment) {
        require_state(states_, c.child, "containment");
        require_state(states_, c.parent, "containment");
    }
    containment_ = transitive_reduction(states_, containment);
}

Ma::Ma(std::string name,
       std::set<StateId> states,
       std::set<Message> messages,
       std::set<Transition> transitions,
       std::set<StateId> initial)
    : name_(std::move(name)),
      states_(std::move(states)),
      messages_(std::move(messages)),
      transitions_(std::move(transitions)),
      initial_(std::move(initial)) {
    require_identifier(name_, "automaton");
    validate_flat_parts(states_, messages_, transitions_, initial_);
}

Hma embed(const Ma& m) {
    return Hma(m.name(), m.states(), {}, m.messages(), m.transitions(), m.initial());
}

HmaBuilder& HmaBuilder::message(std::string name) {
    messages_.insert(Message{std::move(name)});
    return *this;
}

HmaBuilder& HmaBuilder::state(std::string name, bool initial) {
    if (initial) initial_.insert(StateId{name});
    states_.insert(StateId{std::move(name)});
    return *this;
}

HmaBuilder& HmaBuilder::contain(std::string child, std::string parent) {
    states_.insert(StateId{child});
    containment_.insert(Containment{StateId{std::move(child)}, StateId{std::move(parent)}});
    return *this;
}

HmaBuilder& HmaBuilder::trans(std::string source, std::string input, std::string output, std::string target) {
    OutputLabel out = output.empty() ? epsilon : OutputLabel(Message{std::move(output)});
    transitions_.insert(Transition{StateId{std::move(source)}, Message{std::move(input)}, std::move(out),
                                   StateId{std::move(target)}});
    return *this;
}

HmaBuilder& HmaBuilder::initial(std::string name) {
    initial_.insert(StateId{std::move(name)});
    return *this;
}

Hma HmaBuilder::build() const {
    return Hma(name_, states_, containment_, messages_, transitions_, initial_);
}

std::string_view to_string(Severity s) {
    switch (s) {
    case Severity::error:
        return "error";
    case Severity::warning:
        return "warning";
    case Severity::info:
        return "info";
    }
    return "error";
}

std::string to_string(const Diagnostic& d) {
    std::string out(to_string(d.severity));
    out += ' ';
    out += d.code;
    if (!d.subject.empty()) out += " [" + d.subject + "]";
    out += ": " + d.message;
    return out;
}

bool has_errors(const std::vector<Diagnostic>& diagnostics) {
    return std::ranges::any_of(diagnostics, [](const Diagnostic& d) { return d.severity == Severity::error; });
}

void sort_diagnostics(std::vector<Diagnostic>& diagnostics) {
    std::ranges::sort(diagnostics, [](const Diagnostic& a, const Diagnostic& b) {
        return std::tie(a.code, a.subject, a.message) < std::tie(b.code, b.subject, b.message);
    });
}

Hierarchy::Hierarchy(const Hma& h) {
    for (const auto& s : h.states()) {
        parents_[s];
        ancestors_[s];
        descendants_[s];
    }
    for (const auto& c : h.containment()) parents_[c.child].insert(c.parent);

    for (const auto& s : h.states()) {
        auto& acc = ancestors_[s];
        std::vector<StateId> stack(parents_[s].begin(), parents_[s].end());
        while (!stack.empty()) {
            auto top = stack.back();
            stack.pop_back();
            if (!acc.insert(top).second) continue;
            for (const auto& p : parents_[top]) stack.push_back(p);
        }
        if (acc.contains(s)) acyclic_ = false;
        for (const auto& a : acc) descendants_[a].insert(s);
    }
}

const std::set<StateId>& Hierarchy::lookup(const std::map<StateId, std::set<StateId>>& table,
                                           const StateId& s) const {
    auto it = table.find(s);
    if (it == table.end()) throw UnknownState("unknown state '" + s.name + "'");
    return it->second;
}

const std::set<StateId>& Hierarchy::ancestors(const StateId& s) const { return lookup(ancestors_, s); }
const std::set<StateId>& Hierarchy::descendants(const StateId& s) const { return lookup(descendants_, s); }
const std::set<StateId>& Hierarchy::parents(const StateId& s) const { return lookup(parents_, s); }

bool Hierarchy::below(const StateId& lower, const StateId& upper) const {
    return ancestors(lower).contains(upper);
}

bool Hierarchy::below_or_equal(const StateId& lower, const StateId& upper) const {
    return lower == upper || below(lower, upper);
}

bool Hierarchy::is_basic(const StateId& s) const { return descendants(s).empty(); }

std::set<StateId> Hierarchy::basic_below(const StateId& s) const {
    std::set<StateId> out;
    if (is_basic(s)) out.insert(s);
    for (const auto& d : descendants(s)) {
        if (is_basic(d)) out.insert(d);
    }
    return out;
}

std::set<StateId> Hierarchy::basic_states() const {
    std::set<StateId> out;
    for (const auto& [s, below] : descendants_) {
        if (below.empty()) out.insert(s);
    }
    return out;
}

std::set<StateId> basic_states(const Hma& h) {
    Hierarchy hier(h);
    if (!hier.acyclic()) throw MalformedDocument("containment is cyclic; basic states are undefined");
    return hier.basic_states();
}

std::set<StateId> superstates(const Hma& h, const StateId& s) {
    Hierarchy hier(h);
    auto out = hier.ancestors(s);
    out.insert(s);
    return out;
}

std::vector<Diagnostic> check_context_conditions(const Hma& h, Strictness strictness) {
    std::vector<Diagnostic> out;
    Hierarchy hier(h);

    // one error per strongly connected group of the containment closure
    std::set<StateId> reported;
    for (const auto& s : h.states()) {
        if (reported.contains(s) || !hier.below(s, s)) continue;
        std::vector<std::string> members;
        for (const auto& t : h.states()) {
            if (hier.below(s, t) && hier.below(t, s)) {
                reported.insert(t);
                members.push_back(t.name);
            }
        }
        std::string listing;
        for (const auto& m : members) listing += (listing.empty() ? "" : ", ") + m;
        out.push_back({Severity::error, std::string(codes::cyclic_containment),
                       "states {" + listing + "} contain themselves", s.name});
    }

    if (strictness == Strictness::strict && h.initial().empty()) {
        out.push_back({Severity::error, std::string(codes::empty_initial), "the set of initial states is empty", ""});
    }

    // transitions touching a state that has no basic state below it vanish under flattening
    for (const auto& t : h.transitions()) {
        for (const auto& end : {t.source, t.target}) {
            if (hier.basic_below(end).empty()) {
                out.push_back({Severity::warning, std::string(codes::childless_composite),
                               "transition " + to_string(t) + " touches '" + end.name +
                                   "', which has no basic substate; flattening drops it",
                               end.name});
            }
        }
    }

    if (hier.acyclic()) {
        for (const auto& s : h.states()) {
            const auto& ps = hier.parents(s);
            for (auto a = ps.begin(); a != ps.end(); ++a) {
                for (auto b = std::next(a); b != ps.end(); ++b) {
                    if (!hier.below(*a, *b) && !hier.below(*b, *a)) {
                        out.push_back({Severity::warning, std::string(codes::overlapping_states),
                                       "state '" + s.name + "' has incomparable parents '" + a->name + "' and '" +
                                           b->name + "'",
                                       s.name});
                    }
                }
            }
        }

        const auto flat = flatten(h);
        const auto reachable = reachable_states(flat);
        for (const auto& s : flat.states()) {
            if (!reachable.contains(s)) {
                out.push_back({Severity::warning, std::string(codes::unreachable_state),
                               "basic state '" + s.name + "' is unreachable from the initial states", s.name});
            }
        }
    }

    sort_diagnostics(out);
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

void require_context_conditions(const Hma& h, Strictness strictness) {
    auto diagnostics = check_context_conditions(h, strictness);
    std::erase_if(diagnostics, [](const Diagnostic& d) { return d.severity != Severity::error; });
    if (diagnostics.empty()) return;
    std::string what = "document '" + h.name() + "' violates context conditions:";
    for (const auto& d : diagnostics) what += "\n  " + to_string(d);
    throw MalformedDocument(what, std::move(diagnostics));
}

PropertyReport is_deterministic(const Ma& m) {
    PropertyReport report;
    std::map<std::pair<StateId, Message>, std::size_t> outcomes;
    for (const auto& t : m.transitions()) ++outcomes[{t.source, t.input}];
    for (const auto& [key, count] : outcomes) {
        if (count < 2) continue;
        report.holds = false;
        report.diagnostics.push_back({Severity::error, std::string(codes::nondeterministic),
                                      std::to_string(count) + " outcomes for input '" + key.second.name +
                                          "' in state '" + key.first.name + "'",
                                      key.first.name + "," + key.second.name});
    }
    if (m.initial().size() > 1) {
        report.diagnostics.push_back({Severity::info, std::string(codes::multiple_initial),
                                      std::to_string(m.initial().size()) + " initial states", ""});
    }
    sort_diagnostics(report.diagnostics);
    return report;
}

PropertyReport is_complete(const Ma& m) {
    PropertyReport report;
    std::set<std::pair<StateId, Message>> covered;
    for (const auto& t : m.transitions()) covered.emplace(t.source, t.input);
    for (const auto& s : m.states()) {
        for (const auto& i : m.messages()) {
            if (covered.contains({s, i})) continue;
            report.holds = false;
            report.diagnostics.push_back({Severity::error, std::string(codes::partial_pair),
                                          "no transition accepts '" + i.name + "' in state '" + s.name + "'",
                                          s.name + "," + i.name});
        }
    }
    sort_diagnostics(report.diagnostics);
    return report;
}

std::set<StateId> reachable_states(const Ma& m) {
    std::map<StateId, std::set<StateId>> successors;
    for (const auto& t : m.transitions()) successors[t.source].insert(t.target);
    std::set<StateId> seen;
    std::vector<StateId> stack(m.initial().begin(), m.initial().end());
    while (!stack.empty()) {
        auto top = stack.back();
        stack.pop_back();
        if (!seen.insert(top).second) continue;
        for (const auto& next : successors[top]) stack.push_back(next);
    }
    return seen;
}

}  // namespace hma
