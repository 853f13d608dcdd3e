#pragma once

#include <compare>
#include <cstddef>
#include <optional>
#include <set>
#include <vector>

#include "hma/complete.hpp"
#include "hma/core.hpp"

namespace hma {

inline constexpr std::size_t default_trace_cap = 10'000'000;

/// One observation: the inputs consumed and the outputs produced, with
/// epsilon outputs already elided.
struct Trace {
    std::vector<Message> inputs;
    std::vector<Message> outputs;

    bool operator==(const Trace&) const = default;
    /// Canonical order: shortlex on inputs, then shortlex on outputs.
    std::strong_ordering operator<=>(const Trace& other) const;
};

/// Renders `a b / c`; an empty side is `-`.
std::string to_string(const Trace& t);

/// A finite fragment of the trace semantics: every trace with at most
/// `depth` inputs. Iteration follows the canonical trace order.
class TraceSet {
public:
    TraceSet() = default;
    /// Throws MalformedDocument if a trace is longer than `depth`, has more
    /// outputs than inputs, or mentions a message outside `alphabet`.
    TraceSet(std::size_t depth, std::set<Message> alphabet, std::set<Trace> traces = {});

    std::size_t depth() const noexcept { return depth_; }
    const std::set<Message>& alphabet() const noexcept { return alphabet_; }
    const std::set<Trace>& traces() const noexcept { return traces_; }
    std::size_t size() const noexcept { return traces_.size(); }
    bool empty() const noexcept { return traces_.empty(); }
    bool contains(const Trace& t) const { return traces_.contains(t); }

    /// The traces with at most `depth` inputs, as a set of that depth.
    TraceSet restrict_to(std::size_t depth) const;

    bool operator==(const TraceSet&) const = default;

private:
    std::size_t depth_ = 0;
    std::set<Message> alphabet_;
    std::set<Trace> traces_;
};

struct Caps {
    std::size_t chaos = default_chaos_cap;
    std::size_t traces = default_trace_cap;
};

struct SemanticsOptions {
    /// Lenient admits I = {} and yields the empty semantics.
    Strictness strictness = Strictness::strict;
    Caps caps;
};

/// Union of R_n(s) over n <= depth and initial s. Throws CapExceeded when the
/// enumeration holds more than `trace_cap` traces.
TraceSet behaviors(const Ma& m, std::size_t depth, std::size_t trace_cap = default_trace_cap);

/// Implementation semantics: flatten, ignore-complete, enumerate.
TraceSet semantics_impl(const Hma& h, std::size_t depth, const SemanticsOptions& options = {});

/// Specification semantics: flatten, chaos-complete, enumerate.
TraceSet semantics_spec(const Hma& h, std::size_t depth, const SemanticsOptions& options = {});

struct SubsetResult {
    bool holds = true;
    /// A trace of the left operand missing from the right one, when !holds.
    std::optional<Trace> witness;
};

/// Throws DepthMismatch when the bounds differ.
SubsetResult trace_subset(const TraceSet& a, const TraceSet& b);

/// Throws DepthMismatch or AlphabetMismatch.
TraceSet trace_intersection(const TraceSet& a, const TraceSet& b);

/// Whether the specification semantics up to `depth` is nonempty.
bool is_consistent(const Hma& h, std::size_t depth, const Caps& caps = {});

}  // namespace hma
