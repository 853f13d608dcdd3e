#include "hma/behavior.hpp"

#include <algorithm>
#include <cstdint>
#include <string>
#include <utility>

#include "hma/flatten.hpp"

namespace hma {

namespace {

std::strong_ordering shortlex(const std::vector<Message>& a, const std::vector<Message>& b) {
    if (auto c = a.size() <=> b.size(); c != 0) return c;
    return a <=> b;
}

void render_side(std::string& out, const std::vector<Message>& side) {
    if (side.empty()) {
        out += '-';
        return;
    }
    for (std::size_t k = 0; k < side.size(); ++k) {
        if (k) out += ' ';
        out += side[k].name;
    }
}

// Enumeration works on dense indices; outputs store message indices only,
// so epsilon never enters a sequence.
using Symbol = std::uint16_t;
using IndexTrace = std::pair<std::vector<Symbol>, std::vector<Symbol>>;
using IndexTraces = std::vector<IndexTrace>;

struct IndexStep {
    Symbol input;
    std::optional<Symbol> output;
    std::size_t target;
};

}  // namespace

std::strong_ordering Trace::operator<=>(const Trace& other) const {
    if (auto c = shortlex(inputs, other.inputs); c != 0) return c;
    return shortlex(outputs, other.outputs);
}

std::string to_string(const Trace& t) {
    std::string out;
    render_side(out, t.inputs);
    out += " / ";
    render_side(out, t.outputs);
    return out;
}

TraceSet::TraceSet(std::size_t depth, std::set<Message> alphabet, std::set<Trace> traces)
    : depth_(depth), alphabet_(std::move(alphabet)), traces_(std::move(traces)) {
    for (const auto& t : traces_) {
        if (t.inputs.size() > depth_) {
            throw MalformedDocument("trace '" + to_string(t) + "' is longer than depth " + std::to_string(depth_));
        }
        if (t.outputs.size() > t.inputs.size()) {
            throw MalformedDocument("trace '" + to_string(t) + "' has more outputs than inputs");
        }
        for (const auto* side : {&t.inputs, &t.outputs}) {
            for (const auto& m : *side) {
                if (!alphabet_.contains(m)) {
                    throw MalformedDocument("trace '" + to_string(t) + "' uses unknown message '" + m.name + "'");
                }
            }
        }
    }
}

TraceSet TraceSet::restrict_to(std::size_t depth) const {
    std::set<Trace> kept;
    for (const auto& t : traces_) {
        if (t.inputs.size() <= depth) kept.insert(kept.end(), t);
    }
    return TraceSet(depth, alphabet_, std::move(kept));
}

TraceSet behaviors(const Ma& m, std::size_t depth, std::size_t trace_cap) {
    const std::vector<StateId> states(m.states().begin(), m.states().end());
    const std::vector<Message> messages(m.messages().begin(), m.messages().end());
    auto state_index = [&](const StateId& s) {
        return static_cast<std::size_t>(std::ranges::lower_bound(states, s) - states.begin());
    };
    auto message_index = [&](const Message& msg) {
        return static_cast<Symbol>(std::ranges::lower_bound(messages, msg) - messages.begin());
    };

    std::vector<std::vector<IndexStep>> steps(states.size());
    for (const auto& t : m.transitions()) {
        std::optional<Symbol> out;
        if (t.output) out = message_index(*t.output);
        steps[state_index(t.source)].push_back({message_index(t.input), out, state_index(t.target)});
    }

    std::set<std::size_t> initial;
    for (const auto& s : m.initial()) initial.insert(state_index(s));

    auto overflow = [&](std::size_t count) {
        return CapExceeded("behavior enumeration of '" + m.name() + "' reached " + std::to_string(count) +
                           " traces at depth " + std::to_string(depth) + ", cap is " + std::to_string(trace_cap));
    };

    // layer[s] holds R_n(s); every trace in it has exactly n inputs
    std::vector<IndexTraces> layer(states.size(), IndexTraces{IndexTrace{}});
    std::size_t total = 0;
    std::set<Trace> result;
    auto collect = [&] {
        std::set<std::pair<std::vector<Symbol>, std::vector<Symbol>>> merged;
        for (auto s : initial) merged.insert(layer[s].begin(), layer[s].end());
        total += merged.size();
        if (total > trace_cap) throw overflow(total);
        for (const auto& [in, out] : merged) {
            Trace t;
            t.inputs.reserve(in.size());
            for (auto k : in) t.inputs.push_back(messages[k]);
            for (auto k : out) t.outputs.push_back(messages[k]);
            result.insert(std::move(t));
        }
    };

    if (initial.empty()) return TraceSet(depth, m.messages());
    collect();
    for (std::size_t n = 0; n < depth; ++n) {
        std::vector<IndexTraces> next(states.size());
        for (std::size_t s = 0; s < states.size(); ++s) {
            auto& acc = next[s];
            for (const auto& step : steps[s]) {
                for (const auto& [in, out] : layer[step.target]) {
                    IndexTrace extended;
                    extended.first.reserve(in.size() + 1);
                    extended.first.push_back(step.input);
                    extended.first.insert(extended.first.end(), in.begin(), in.end());
                    if (step.output) extended.second.push_back(*step.output);
                    extended.second.insert(extended.second.end(), out.begin(), out.end());
                    acc.push_back(std::move(extended));
                }
                if (acc.size() > 2 * trace_cap) throw overflow(acc.size());
            }
            std::ranges::sort(acc);
            acc.erase(std::unique(acc.begin(), acc.end()), acc.end());
            if (acc.size() > trace_cap) throw overflow(acc.size());
        }
        layer = std::move(next);
        collect();
    }
    return TraceSet(depth, m.messages(), std::move(result));
}

namespace {

Ma prepared(const Hma& h, const SemanticsOptions& options) {
    require_context_conditions(h, options.strictness);
    return flatten(h);
}

}  // namespace

TraceSet semantics_impl(const Hma& h, std::size_t depth, const SemanticsOptions& options) {
    return behaviors(complete_ignore(prepared(h, options)), depth, options.caps.traces);
}

TraceSet semantics_spec(const Hma& h, std::size_t depth, const SemanticsOptions& options) {
    return behaviors(complete_chaos(prepared(h, options), options.caps.chaos), depth, options.caps.traces);
}

SubsetResult trace_subset(const TraceSet& a, const TraceSet& b) {
    if (a.depth() != b.depth()) {
        throw DepthMismatch("cannot compare trace sets of depth " + std::to_string(a.depth()) + " and " +
                            std::to_string(b.depth()));
    }
    for (const auto& t : a.traces()) {
        if (!b.contains(t)) return {false, t};
    }
    return {};
}

TraceSet trace_intersection(const TraceSet& a, const TraceSet& b) {
    if (a.depth() != b.depth()) {
        throw DepthMismatch("cannot intersect trace sets of depth " + std::to_string(a.depth()) + " and " +
                            std::to_string(b.depth()));
    }
    if (a.alphabet() != b.alphabet()) throw AlphabetMismatch("cannot intersect trace sets over different alphabets");
    std::set<Trace> common;
    std::ranges::set_intersection(a.traces(), b.traces(), std::inserter(common, common.end()));
    return TraceSet(a.depth(), a.alphabet(), std::move(common));
}

bool is_consistent(const Hma& h, std::size_t depth, const Caps& caps) {
    const auto spec = semantics_spec(h, depth, {Strictness::lenient, caps});
    const bool nonempty = !spec.empty();
    if (nonempty == flatten(h).initial().empty()) {
        throw Error("internal: consistency verdict disagrees with the initial-state reduction for '" + h.name() + "'");
    }
    return nonempty;
}

}  // namespace hma
