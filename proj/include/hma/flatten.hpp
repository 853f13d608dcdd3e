#pragma once

#include <map>
#include <set>

#include "hma/core.hpp"

namespace hma {

struct FlattenResult {
    Ma automaton;
    /// For every flat transition, the hierarchical transitions that produced it.
    std::map<Transition, std::set<Transition>> witnesses;
};

/// Removes the state hierarchy: keeps basic states, projects every transition
/// onto all basic states below its source and target, and resolves initial
/// states to the basic states below them. Throws MalformedDocument if the
/// document has context-condition errors in lenient mode.
FlattenResult flatten_with_witnesses(const Hma& h);

Ma flatten(const Hma& h);

}  // namespace hma
