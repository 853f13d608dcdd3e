#pragma once

// Random automata for property and acceptance tests. Deterministic given the seed.

#include <random>
#include <string>
#include <vector>

#include "hma/core.hpp"

namespace hma::testing {

using Rng = std::mt19937_64;

struct GenParams {
    std::size_t max_states = 6;
    std::size_t max_messages = 3;
    std::size_t max_transitions = 8;
    /// Probability that a state (other than the first) is nested under an earlier one.
    double nest_probability = 0.4;
    /// Probability of a second, incomparable parent. Zero keeps containment a forest.
    double overlap_probability = 0.0;
    bool require_initial = true;
};

inline std::size_t pick(Rng& rng, std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

inline bool chance(Rng& rng, double p) { return std::bernoulli_distribution(p)(rng); }

inline std::string state_name(std::size_t k) { return "s" + std::to_string(k); }
inline std::string message_name(std::size_t k) { return "m" + std::to_string(k); }

inline Hma random_hma(Rng& rng, const GenParams& params = {}) {
    const std::size_t n_states = pick(rng, 1, params.max_states);
    const std::size_t n_messages = pick(rng, 1, params.max_messages);
    HmaBuilder b("G");
    for (std::size_t m = 0; m < n_messages; ++m) b.message(message_name(m));
    for (std::size_t s = 0; s < n_states; ++s) b.state(state_name(s));

    // parents always have a smaller index, so containment is acyclic
    for (std::size_t s = 1; s < n_states; ++s) {
        if (!chance(rng, params.nest_probability)) continue;
        const std::size_t parent = pick(rng, 0, s - 1);
        b.contain(state_name(s), state_name(parent));
        if (params.overlap_probability > 0 && chance(rng, params.overlap_probability)) {
            b.contain(state_name(s), state_name(pick(rng, 0, s - 1)));
        }
    }

    const std::size_t n_trans = pick(rng, 0, params.max_transitions);
    for (std::size_t k = 0; k < n_trans; ++k) {
        const std::size_t out = pick(rng, 0, n_messages);
        b.trans(state_name(pick(rng, 0, n_states - 1)), message_name(pick(rng, 0, n_messages - 1)),
                out == n_messages ? "" : message_name(out), state_name(pick(rng, 0, n_states - 1)));
    }

    const std::size_t n_initial = params.require_initial ? pick(rng, 1, 2) : pick(rng, 0, 2);
    for (std::size_t k = 0; k < n_initial; ++k) b.initial(state_name(pick(rng, 0, n_states - 1)));
    return b.build();
}

/// Flat automaton with at least one initial state.
inline Ma random_ma(Rng& rng, const GenParams& params = {}) {
    GenParams flat = params;
    flat.nest_probability = 0.0;
    flat.overlap_probability = 0.0;
    const Hma h = random_hma(rng, flat);
    return Ma(h.name(), h.states(), h.messages(), h.transitions(), h.initial());
}

/// Hierarchical automaton whose flattening is deterministic and complete:
/// every message is handled exactly once on each root-to-leaf chain, and all
/// targets are basic states.
inline Hma random_deterministic_complete_hma(Rng& rng, const GenParams& params = {}) {
    const std::size_t n_states = pick(rng, 1, params.max_states);
    const std::size_t n_messages = pick(rng, 1, params.max_messages);
    std::vector<std::vector<std::size_t>> children(n_states);
    std::vector<bool> is_root(n_states, true);
    HmaBuilder b("D");
    for (std::size_t m = 0; m < n_messages; ++m) b.message(message_name(m));
    for (std::size_t s = 0; s < n_states; ++s) b.state(state_name(s));
    for (std::size_t s = 1; s < n_states; ++s) {
        if (!chance(rng, params.nest_probability)) continue;
        const std::size_t parent = pick(rng, 0, s - 1);
        b.contain(state_name(s), state_name(parent));
        children[parent].push_back(s);
        is_root[s] = false;
    }
    std::vector<std::size_t> basic;
    for (std::size_t s = 0; s < n_states; ++s) {
        if (children[s].empty()) basic.push_back(s);
    }

    auto handle = [&](auto&& self, std::size_t s, std::size_t m, bool handled) -> void {
        if (!handled && (children[s].empty() || chance(rng, 0.4))) {
            const std::size_t out = pick(rng, 0, n_messages);
            b.trans(state_name(s), message_name(m), out == n_messages ? "" : message_name(out),
                    state_name(basic[pick(rng, 0, basic.size() - 1)]));
            handled = true;
        }
        for (auto c : children[s]) self(self, c, m, handled);
    };
    for (std::size_t m = 0; m < n_messages; ++m) {
        for (std::size_t s = 0; s < n_states; ++s) {
            if (is_root[s]) handle(handle, s, m, false);
        }
    }
    b.initial(state_name(basic[pick(rng, 0, basic.size() - 1)]));
    return b.build();
}

}  // namespace hma::testing
