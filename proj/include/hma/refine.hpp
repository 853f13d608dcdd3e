#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "hma/behavior.hpp"

namespace hma {

enum class Relation { refines_up_to_depth, refuted };

struct RefinementVerdict {
    Relation relation = Relation::refines_up_to_depth;
    std::size_t depth = 0;
    /// Present iff refuted: a trace of the refining automaton that the refined one lacks.
    std::optional<Trace> counterexample;
};

/// `refines-up-to-depth N` or `refuted: <trace>`.
std::string to_string(const RefinementVerdict& v);

/// Whether the specification semantics of `refiner` is contained in that of
/// `refined`, up to `depth`. Both must pass strict context conditions and share
/// one alphabet.
RefinementVerdict check_refinement(const Hma& refiner, const Hma& refined, std::size_t depth, const Caps& caps = {});

struct RemoveInitial {
    StateId state;
};

struct RemoveUnreachable {
    StateId state;
};

/// Replaces basic `state` by `first` and `second`, each inheriting all of its transitions.
struct SplitState {
    StateId state;
    StateId first;
    StateId second;
};

using RuleApplication = std::variant<RemoveInitial, RemoveUnreachable, SplitState>;

std::string_view rule_name(const RuleApplication& app);
/// `rule-name arg1 arg2 ...`
std::string to_string(const RuleApplication& app);

/// Builds an application from a rule name and its positional arguments.
/// Throws RuleConditionViolated on an unknown rule or a wrong argument count.
RuleApplication make_rule(std::string_view name, const std::vector<std::string>& args);

/// One application per line; blank lines and `//` comments are skipped.
std::vector<RuleApplication> parse_rule_script(std::string_view text);

/// Applies one transformation. Throws RuleConditionViolated naming the failed
/// context condition; the input must itself pass strict context conditions.
Hma apply_rule(const Hma& h, const RuleApplication& app);

/// Checks that the transformed automaton refines the original up to `depth`.
RefinementVerdict verify_rule_soundness(const Hma& h, const RuleApplication& app, std::size_t depth,
                                        const Caps& caps = {});

}  // namespace hma
