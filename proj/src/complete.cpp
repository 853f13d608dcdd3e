#include "hma/complete.hpp"

#include <string>

namespace hma {

std::set<StateInput> partial_pairs(const Ma& m) {
    std::set<StateInput> covered;
    for (const auto& t : m.transitions()) covered.emplace(t.source, t.input);
    std::set<StateInput> partial;
    for (const auto& s : m.states()) {
        for (const auto& i : m.messages()) {
            if (!covered.contains({s, i})) partial.emplace(s, i);
        }
    }
    return partial;
}

Ma complete_ignore(const Ma& m) {
    auto transitions = m.transitions();
    for (const auto& [s, i] : partial_pairs(m)) transitions.insert(Transition{s, i, epsilon, s});
    return Ma(m.name(), m.states(), m.messages(), std::move(transitions), m.initial());
}

Ma complete_chaos(const Ma& m, std::size_t cap) {
    const auto partial = partial_pairs(m);
    const std::size_t added = partial.size() * (m.messages().size() + 1) * m.states().size();
    if (m.transitions().size() + added > cap) {
        throw CapExceeded("chaos completion of '" + m.name() + "' needs " +
                          std::to_string(m.transitions().size() + added) + " transitions, cap is " +
                          std::to_string(cap));
    }

    std::vector<OutputLabel> outputs{epsilon};
    for (const auto& msg : m.messages()) outputs.emplace_back(msg);

    auto transitions = m.transitions();
    for (const auto& [s, i] : partial) {
        for (const auto& u : outputs) {
            for (const auto& p : m.states()) transitions.insert(Transition{s, i, u, p});
        }
    }
    return Ma(m.name(), m.states(), m.messages(), std::move(transitions), m.initial());
}

}  // namespace hma
