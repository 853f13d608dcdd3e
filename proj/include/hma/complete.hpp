#pragma once

#include <cstddef>
#include <set>
#include <utility>

#include "hma/core.hpp"

namespace hma {

inline constexpr std::size_t default_chaos_cap = 1'000'000;

using StateInput = std::pair<StateId, Message>;

/// (state, input) pairs with no transition accepting the input.
std::set<StateInput> partial_pairs(const Ma& m);

/// Ignore completion: an epsilon self-loop for every partial pair.
Ma complete_ignore(const Ma& m);

/// Chaos completion: every output and every target for every partial pair.
/// Throws CapExceeded if the completed relation would hold more than `cap`
/// transitions.
Ma complete_chaos(const Ma& m, std::size_t cap = default_chaos_cap);

}  // namespace hma
