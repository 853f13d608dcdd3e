#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "hma/cli.hpp"
#include "hma/textio.hpp"

using namespace hma;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result invoke(std::vector<std::string> args, std::map<std::string, std::string> env = {}) {
    std::ostringstream out, err;
    const int code = cli::run(args, out, err, [&](std::string_view name) -> std::optional<std::string> {
        auto it = env.find(std::string(name));
        if (it == env.end()) return std::nullopt;
        return it->second;
    });
    return {code, out.str(), err.str()};
}

std::string corpus(const char* name) { return std::string(HMA_SOURCE_DIR "/corpus/") + name; }

std::string write_temp(const std::string& name, const std::string& text) {
    const auto path = std::filesystem::temp_directory_path() / ("hma_cli_test_" + name);
    std::ofstream(path) << text;
    return path.string();
}

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

}  // namespace

TEST_CASE("behaviors golden output") {
    const auto r = invoke({"behaviors", corpus("two_loop.hma"), "--depth", "2", "--mode", "impl"});
    CHECK(r.code == 0);
    CHECK(r.out == slurp(HMA_SOURCE_DIR "/tests/golden/two_loop.impl.d2.traces"));
    CHECK(r.err.empty());
}

TEST_CASE("refines") {
    const auto same = invoke({"refines", corpus("two_loop.hma"), corpus("two_loop.hma"), "--depth", "3"});
    CHECK(same.code == 0);
    CHECK(same.out == "refines-up-to-depth 3\n");

    const auto a1 = write_temp("a1.hma", "hma A { messages { a, b, c } state s initial; trans s -a/b-> s; }");
    const auto a2 = write_temp("a2.hma", "hma A { messages { a, b, c } state s initial; trans s -a/c-> s; }");
    const auto refuted = invoke({"refines", a2, a1, "--depth", "1"});
    CHECK(refuted.code == 1);
    CHECK(refuted.out == "refuted: a / c\n");

    const auto impl = invoke({"refines", a2, a1, "--mode", "impl"});
    CHECK(impl.code == 2);
    CHECK(impl.out.empty());
    CHECK_FALSE(impl.err.empty());
}

TEST_CASE("consistent") {
    const auto lenient = invoke({"consistent", corpus("empty_initial.hma"), "--depth", "1", "--strictness", "lenient"});
    CHECK(lenient.code == 1);
    CHECK(lenient.out == "inconsistent\n");

    CHECK(invoke({"consistent", corpus("empty_initial.hma"), "--depth", "1"}).code == 2);
    const auto ok = invoke({"consistent", corpus("nested.hma")});
    CHECK(ok.code == 0);
    CHECK(ok.out == "consistent\n");
}

TEST_CASE("check") {
    const auto errors = invoke({"check", corpus("empty_initial.hma")});
    CHECK(errors.code == 2);
    CHECK(errors.out.find("error empty-initial") != std::string::npos);

    const auto clean = invoke({"check", corpus("nested.hma")});
    CHECK(clean.code == 0);
    CHECK(clean.out.empty());

    const auto broken = write_temp("broken.hma", "hma T { messages { a } state s; trans s -a/b-> s; }");
    const auto parse = invoke({"check", broken});
    CHECK(parse.code == 2);
    CHECK(parse.out.empty());
    CHECK(parse.err.find("undeclared message 'b'") != std::string::npos);
}

TEST_CASE("data outputs parse back") {
    const auto flat = invoke({"flatten", corpus("nested.hma")});
    CHECK(flat.code == 0);
    CHECK(flat.out == slurp(HMA_SOURCE_DIR "/tests/golden/nested.flat.hma"));

    for (const char* mode : {"impl", "spec"}) {
        const auto completed = invoke({"complete", corpus("nested.hma"), "--mode", mode});
        CHECK(completed.code == 0);
        CHECK(parse_hma(completed.out).ok());

        const auto composed = invoke({"compose", corpus("nested.hma"), corpus("nested.hma"), "--depth", "2", "--mode", mode});
        CHECK(composed.code == 0);
        CHECK(composed.out == invoke({"behaviors", corpus("nested.hma"), "--depth", "2", "--mode", mode}).out);
        CHECK_NOTHROW(parse_traces(composed.out));
    }
}

TEST_CASE("caps map to exit code 3") {
    const auto chaos = invoke({"behaviors", corpus("nested.hma"), "--chaos-cap", "3"});
    CHECK(chaos.code == 3);
    CHECK(chaos.out.empty());
    CHECK(invoke({"behaviors", corpus("nested.hma"), "--depth", "4", "--trace-cap", "10"}).code == 3);
}

TEST_CASE("configuration precedence: flags over environment over defaults") {
    const auto from_env = invoke({"behaviors", corpus("two_loop.hma"), "--mode", "impl"}, {{"HMA_DEPTH", "1"}});
    CHECK(from_env.out.starts_with("#traces depth 1 "));
    const auto from_flag =
        invoke({"behaviors", corpus("two_loop.hma"), "--mode", "impl", "--depth", "2"}, {{"HMA_DEPTH", "1"}});
    CHECK(from_flag.out.starts_with("#traces depth 2 "));
    const auto defaults = invoke({"behaviors", corpus("two_loop.hma"), "--mode", "impl"});
    CHECK(defaults.out.starts_with("#traces depth 3 "));

    CHECK(invoke({"behaviors", corpus("nested.hma")}, {{"HMA_CHAOS_CAP", "3"}}).code == 3);
    CHECK(invoke({"behaviors", corpus("nested.hma")}, {{"HMA_TRACE_CAP", "abc"}}).code == 2);
    CHECK(invoke({"behaviors", corpus("nested.hma")}, {{"HMA_TRACE_CAP", "0"}}).code == 2);
}

TEST_CASE("transform") {
    const auto doc = write_temp("split.hma", "hma S { messages { a, b } state s initial; trans s -a/b-> s; }");
    const auto r = invoke({"transform", doc, "--rule", "split_state", "s", "s1", "s2", "--depth", "2"});
    CHECK(r.code == 0);
    const auto parsed = parse_hma(r.out);
    REQUIRE(parsed.ok());
    CHECK(parsed.document->transitions().size() == 4);
    CHECK(r.out.find("// split_state s s1 s2: refines-up-to-depth 2\n") != std::string::npos);

    const auto script = write_temp("rules.txt", "split_state s s1 s2\nremove_initial s1\n");
    const auto batch = invoke({"transform", doc, "--script", script, "--depth", "2"});
    CHECK(batch.code == 0);
    CHECK(batch.out.find("// overall: refines-up-to-depth 2") != std::string::npos);

    CHECK(invoke({"transform", doc, "--rule", "remove_initial", "s"}).code == 2);
    CHECK(invoke({"transform", doc}).code == 2);
}

TEST_CASE("usage errors") {
    CHECK(invoke({}).code == 2);
    CHECK(invoke({"frobnicate"}).code == 2);
    CHECK(invoke({"behaviors"}).code == 2);
    CHECK(invoke({"behaviors", corpus("nested.hma"), "--mode", "angelic"}).code == 2);
    CHECK(invoke({"behaviors", "/nonexistent/file.hma"}).code == 2);
    CHECK(invoke({"--help"}).code == 0);
}

TEST_CASE("--output writes the data stream to a file") {
    const auto path = (std::filesystem::temp_directory_path() / "hma_cli_test_out.traces").string();
    const auto r = invoke({"behaviors", corpus("two_loop.hma"), "--depth", "2", "--mode", "impl", "-o", path});
    CHECK(r.code == 0);
    CHECK(r.out.empty());
    CHECK(slurp(path) == slurp(HMA_SOURCE_DIR "/tests/golden/two_loop.impl.d2.traces"));
}
