#include <doctest.h>

#include <algorithm>

#include "hma/behavior.hpp"
#include "hma/flatten.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

using namespace hma;

namespace {

std::vector<Message> word(std::string_view letters) {
    std::vector<Message> out;
    for (char c : letters) out.push_back(Message{std::string(1, c)});
    return out;
}

Trace tr(std::string_view in, std::string_view out) { return Trace{word(in), word(out)}; }

// S={s}, M={a,b}, delta={(s,a,b,s),(s,b,eps,s)}, I={s}
Hma two_loop() {
    return HmaBuilder("two_loop")
        .message("a")
        .message("b")
        .state("s", true)
        .trans("s", "a", "b", "s")
        .trans("s", "b", "", "s")
        .build();
}

Hma single_partial() { return HmaBuilder().message("a").state("s", true).build(); }

}  // namespace

TEST_CASE("canonical trace order is shortlex") {
    const std::vector<Trace> sorted{tr("", ""), tr("a", ""), tr("a", "b"), tr("b", ""), tr("aa", "bb"), tr("ab", "b")};
    CHECK(std::ranges::is_sorted(sorted));
    CHECK(to_string(tr("", "")) == "- / -");
    CHECK(to_string(Trace{{Message{"a"}, Message{"b"}}, {Message{"c"}}}) == "a b / c");
}

TEST_CASE("behaviors") {
    SUBCASE("no initial states gives the empty set") {
        const auto m = flatten(HmaBuilder().message("a").state("s").trans("s", "a", "a", "s").build());
        for (std::size_t d = 0; d < 4; ++d) CHECK(behaviors(m, d).empty());
    }
    SUBCASE("hand-unrolled recursion at depth 2") {
        const auto traces = behaviors(flatten(two_loop()), 2);
        const std::set<Trace> expected{tr("", ""),     tr("a", "b"),  tr("b", ""), tr("aa", "bb"),
                                       tr("ab", "b"), tr("ba", "b"), tr("bb", "")};
        CHECK(traces.traces() == expected);
        CHECK(traces.depth() == 2);
    }
    SUBCASE("depth 0 is the empty observation") {
        CHECK(behaviors(flatten(two_loop()), 0).traces() == std::set<Trace>{tr("", "")});
    }
    SUBCASE("trace cap") {
        CHECK_THROWS_AS(behaviors(flatten(two_loop()), 2, 5), CapExceeded);
        CHECK(behaviors(flatten(two_loop()), 2, 7).size() == 7);
    }
}

TEST_CASE("semantics_impl and semantics_spec") {
    CHECK(semantics_impl(single_partial(), 2).traces() == std::set<Trace>{tr("", ""), tr("a", ""), tr("aa", "")});
    CHECK(semantics_spec(single_partial(), 1).traces() == std::set<Trace>{tr("", ""), tr("a", ""), tr("a", "a")});

    // complete and deterministic: both completions add nothing
    const auto h = HmaBuilder()
                       .message("a")
                       .state("p", true)
                       .state("q")
                       .trans("p", "a", "a", "q")
                       .trans("q", "a", "", "p")
                       .build();
    for (std::size_t d = 0; d < 5; ++d) CHECK(semantics_impl(h, d) == semantics_spec(h, d));

    CHECK_THROWS_AS(semantics_spec(HmaBuilder().message("a").state("s").build(), 1), MalformedDocument);
    CHECK(semantics_spec(HmaBuilder().message("a").state("s").build(), 1, {Strictness::lenient, {}}).empty());
    CHECK_THROWS_AS(semantics_spec(single_partial(), 1, {Strictness::strict, {1, 100}}), CapExceeded);
}

TEST_CASE("trace_subset") {
    const std::set<Message> ab{Message{"a"}, Message{"b"}, Message{"c"}};
    const TraceSet small(1, ab, {tr("a", "b")});
    const TraceSet big(1, ab, {tr("a", "b"), tr("a", "c")});
    CHECK(trace_subset(big, big).holds);
    CHECK(trace_subset(small, big).holds);
    const auto refuted = trace_subset(TraceSet(1, ab, {tr("a", "c")}), small);
    CHECK_FALSE(refuted.holds);
    CHECK(refuted.witness == tr("a", "c"));
    CHECK_THROWS_AS(trace_subset(small, TraceSet(2, ab)), DepthMismatch);
}

TEST_CASE("trace_intersection") {
    const auto a = semantics_spec(two_loop(), 2);
    CHECK(trace_intersection(a, a) == a);
    CHECK(trace_intersection(a, TraceSet(2, a.alphabet())).empty());
    CHECK_THROWS_AS(trace_intersection(a, TraceSet(1, a.alphabet())), DepthMismatch);
    CHECK_THROWS_AS(trace_intersection(a, TraceSet(2, {Message{"z"}})), AlphabetMismatch);

    auto with = [](bool extra) {
        HmaBuilder b;
        b.message("a").message("b").message("c").state("s", true).trans("s", "a", "b", "s");
        if (extra) b.trans("s", "a", "c", "s");
        return b.build();
    };
    const auto a1 = semantics_spec(with(false), 2);
    CHECK(trace_intersection(a1, semantics_spec(with(true), 2)) == a1);
}

TEST_CASE("TraceSet rejects traces that break its invariants") {
    const std::set<Message> ab{Message{"a"}, Message{"b"}};
    CHECK_THROWS_AS(TraceSet(1, ab, {tr("aa", "")}), MalformedDocument);
    CHECK_THROWS_AS(TraceSet(2, ab, {tr("a", "ab")}), MalformedDocument);
    CHECK_THROWS_AS(TraceSet(2, ab, {tr("c", "")}), MalformedDocument);
}

TEST_CASE("is_consistent") {
    CHECK_FALSE(is_consistent(HmaBuilder().message("a").state("s").build(), 2));
    CHECK(is_consistent(two_loop(), 3));
    CHECK(is_consistent(HmaBuilder().message("a").state("Top", true).contain("A", "Top").build(), 1));
}

TEST_CASE("behavior properties over generated automata") {
    testing::Rng rng(31);
    for (int k = 0; k < 150; ++k) {
        const auto h = testing::random_hma(rng);
        std::optional<TraceSet> previous_impl, previous_spec;
        for (std::size_t d = 0; d <= 4; ++d) {
            const auto impl = semantics_impl(h, d);
            const auto spec = semantics_spec(h, d);
            CHECK(trace_subset(impl, spec).holds);
            if (previous_spec) {
                CHECK(trace_subset(previous_impl->restrict_to(d), impl).holds);
                CHECK(spec.restrict_to(d - 1) == *previous_spec);
            }
            for (const auto& t : spec.traces()) {
                CHECK(t.outputs.size() <= t.inputs.size());
                // each prefix is realized with a prefix of the outputs
                for (std::size_t j = 0; j < t.inputs.size(); ++j) {
                    const std::vector<Message> in(t.inputs.begin(), t.inputs.begin() + j);
                    const bool found = std::ranges::any_of(spec.traces(), [&](const Trace& u) {
                        return u.inputs == in && u.outputs.size() <= t.outputs.size() &&
                               std::equal(u.outputs.begin(), u.outputs.end(), t.outputs.begin());
                    });
                    CHECK(found);
                }
            }
            previous_impl = impl;
            previous_spec = spec;
        }
    }
}

TEST_CASE("behaviors matches the step-by-step simulator") {
    testing::Rng rng(37);
    testing::GenParams params;
    params.max_states = 3;
    params.max_messages = 2;
    params.nest_probability = 0.0;
    for (int k = 0; k < 200; ++k) {
        const auto m = testing::random_ma(rng, params);
        for (std::size_t d = 0; d <= 3; ++d) CHECK(behaviors(m, d).traces() == testing::oracle_behaviors(m, d));
    }
}
