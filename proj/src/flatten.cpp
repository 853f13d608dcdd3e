#include "hma/flatten.hpp"

namespace hma {

FlattenResult flatten_with_witnesses(const Hma& h) {
    Hierarchy hier(h);
    if (!hier.acyclic()) require_context_conditions(h, Strictness::lenient);

    std::map<StateId, std::set<StateId>> basic_below;
    for (const auto& s : h.states()) basic_below.emplace(s, hier.basic_below(s));

    FlattenResult result;
    std::set<Transition> transitions;
    for (const auto& t : h.transitions()) {
        for (const auto& source : basic_below.at(t.source)) {
            for (const auto& target : basic_below.at(t.target)) {
                Transition flat{source, t.input, t.output, target};
                result.witnesses[flat].insert(t);
                transitions.insert(std::move(flat));
            }
        }
    }

    std::set<StateId> initial;
    for (const auto& s : h.initial()) {
        const auto& below = basic_below.at(s);
        initial.insert(below.begin(), below.end());
    }

    result.automaton = Ma(h.name(), hier.basic_states(), h.messages(), std::move(transitions), std::move(initial));
    return result;
}

Ma flatten(const Hma& h) { return flatten_with_witnesses(h).automaton; }

}  // namespace hma
