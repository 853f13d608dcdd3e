#pragma once

#include <compare>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "hma/errors.hpp"

namespace hma {

/// Name of a message in an automaton's alphabet.
struct Message {
    std::string name;
    auto operator<=>(const Message&) const = default;
};

struct StateId {
    std::string name;
    auto operator<=>(const StateId&) const = default;
};

/// Output of a transition: a message, or nullopt for the empty output epsilon.
/// Epsilon orders before every message.
using OutputLabel = std::optional<Message>;
inline const OutputLabel epsilon{};

struct Transition {
    StateId source;
    Message input;
    OutputLabel output;
    StateId target;
    auto operator<=>(const Transition&) const = default;
};

/// Immediate strict containment edge: `child` is a proper substate of `parent`.
struct Containment {
    StateId child;
    StateId parent;
    auto operator<=>(const Containment&) const = default;
};

/// True for identifiers of the form [A-Za-z][A-Za-z0-9_]* that are not DSL keywords.
bool is_valid_identifier(std::string_view text);
bool is_keyword(std::string_view text);

std::string to_string(const OutputLabel& output);
std::string to_string(const Transition& t);

/// Hierarchical Mealy automaton (S, <, M, delta, I).
///
/// Construction enforces the referential invariants: every state named by a
/// containment edge, transition or initial state is declared, every input and
/// output is a declared message, and all names are valid identifiers. Cyclic
/// containment is representable on purpose; it is rejected later by
/// check_context_conditions. Acyclic containment is normalized to its
/// transitive reduction.
class Hma {
public:
    Hma() = default;
    Hma(std::string name,
        std::set<StateId> states,
        std::set<Containment> containment,
        std::set<Message> messages,
        std::set<Transition> transitions,
        std::set<StateId> initial);

    const std::string& name() const noexcept { return name_; }
    const std::set<StateId>& states() const noexcept { return states_; }
    const std::set<Containment>& containment() const noexcept { return containment_; }
    const std::set<Message>& messages() const noexcept { return messages_; }
    const std::set<Transition>& transitions() const noexcept { return transitions_; }
    const std::set<StateId>& initial() const noexcept { return initial_; }

    bool operator==(const Hma&) const = default;

private:
    std::string name_ = "H";
    std::set<StateId> states_;
    std::set<Containment> containment_;
    std::set<Message> messages_;
    std::set<Transition> transitions_;
    std::set<StateId> initial_;
};

/// Flat Mealy automaton (S2, M2, delta2, I2).
class Ma {
public:
    Ma() = default;
    Ma(std::string name,
       std::set<StateId> states,
       std::set<Message> messages,
       std::set<Transition> transitions,
       std::set<StateId> initial);

    const std::string& name() const noexcept { return name_; }
    const std::set<StateId>& states() const noexcept { return states_; }
    const std::set<Message>& messages() const noexcept { return messages_; }
    const std::set<Transition>& transitions() const noexcept { return transitions_; }
    const std::set<StateId>& initial() const noexcept { return initial_; }

    bool operator==(const Ma&) const = default;

private:
    std::string name_ = "H";
    std::set<StateId> states_;
    std::set<Message> messages_;
    std::set<Transition> transitions_;
    std::set<StateId> initial_;
};

/// A flat automaton viewed as an HMA with empty containment.
Hma embed(const Ma& m);

/// Incremental construction with string names; validation happens in build().
class HmaBuilder {
public:
    explicit HmaBuilder(std::string name = "H") : name_(std::move(name)) {}

    HmaBuilder& message(std::string name);
    HmaBuilder& state(std::string name, bool initial = false);
    /// Declares `child` (if needed) and places it directly under `parent`.
    HmaBuilder& contain(std::string child, std::string parent);
    /// An empty `output` denotes epsilon.
    HmaBuilder& trans(std::string source, std::string input, std::string output, std::string target);
    HmaBuilder& initial(std::string name);

    Hma build() const;

private:
    std::string name_;
    std::set<StateId> states_;
    std::set<Containment> containment_;
    std::set<Message> messages_;
    std::set<Transition> transitions_;
    std::set<StateId> initial_;
};

enum class Severity { error, warning, info };
std::string_view to_string(Severity s);

/// Closed set of diagnostic codes.
namespace codes {
inline constexpr std::string_view cyclic_containment = "cyclic-containment";
inline constexpr std::string_view empty_initial = "empty-initial";
inline constexpr std::string_view overlapping_states = "overlapping-states";
inline constexpr std::string_view unreachable_state = "unreachable-state";
inline constexpr std::string_view childless_composite = "childless-composite";
inline constexpr std::string_view nondeterministic = "nondeterministic";
inline constexpr std::string_view partial_pair = "partial-pair";
inline constexpr std::string_view multiple_initial = "multiple-initial";
}  // namespace codes

struct Diagnostic {
    Severity severity = Severity::error;
    std::string code;
    std::string message;
    /// Name of the state or rendered transition the finding is about; empty if none.
    std::string subject;

    bool operator==(const Diagnostic&) const = default;
};

/// Renders `severity code [subject]: message`.
std::string to_string(const Diagnostic& d);
bool has_errors(const std::vector<Diagnostic>& diagnostics);
/// Orders by code, then subject, then message.
void sort_diagnostics(std::vector<Diagnostic>& diagnostics);

enum class Strictness { lenient, strict };

/// Context conditions of the HMA language. An empty error subset means the
/// document is admitted. Result order is deterministic.
std::vector<Diagnostic> check_context_conditions(const Hma& h, Strictness strictness);

/// Throws MalformedDocument carrying the errors if the check reports any.
void require_context_conditions(const Hma& h, Strictness strictness);

/// Closure queries over the containment relation of one automaton.
class Hierarchy {
public:
    explicit Hierarchy(const Hma& h);

    bool acyclic() const noexcept { return acyclic_; }
    /// Strict ancestors (transitive parents).
    const std::set<StateId>& ancestors(const StateId& s) const;
    /// Strict descendants (transitive children).
    const std::set<StateId>& descendants(const StateId& s) const;
    const std::set<StateId>& parents(const StateId& s) const;
    bool below(const StateId& lower, const StateId& upper) const;
    bool below_or_equal(const StateId& lower, const StateId& upper) const;
    bool is_basic(const StateId& s) const;
    /// Basic states b with b <= s (reflexive).
    std::set<StateId> basic_below(const StateId& s) const;
    std::set<StateId> basic_states() const;

private:
    const std::set<StateId>& lookup(const std::map<StateId, std::set<StateId>>& table, const StateId& s) const;

    std::map<StateId, std::set<StateId>> parents_;
    std::map<StateId, std::set<StateId>> ancestors_;
    std::map<StateId, std::set<StateId>> descendants_;
    bool acyclic_ = true;
};

/// States without proper substates. Throws MalformedDocument on cyclic containment.
std::set<StateId> basic_states(const Hma& h);

/// {s} together with all transitive parents of s. Throws UnknownState.
std::set<StateId> superstates(const Hma& h, const StateId& s);

/// Outcome of a structural property check.
struct PropertyReport {
    bool holds = true;
    std::vector<Diagnostic> diagnostics;
};

/// Holds iff every (state, input) pair has at most one (output, target).
/// More than one initial state is reported as info without affecting the verdict;
/// the behavior relation is then not functional even when this holds.
PropertyReport is_deterministic(const Ma& m);
PropertyReport is_complete(const Ma& m);

/// States reachable from the initial states along the transition relation.
std::set<StateId> reachable_states(const Ma& m);

}  // namespace hma
