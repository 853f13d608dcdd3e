#include "hma/cli.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "hma/complete.hpp"
#include "hma/flatten.hpp"
#include "hma/refine.hpp"
#include "hma/textio.hpp"

namespace hma::cli {

namespace {

class UsageError : public Error {
public:
    using Error::Error;
};

std::size_t parse_natural(const std::string& text, std::string_view what) {
    std::size_t used = 0;
    unsigned long long value = 0;
    try {
        value = std::stoull(text, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used != text.size() || text.empty() || text.front() == '-') {
        throw UsageError(std::string(what) + " must be a natural number, got '" + text + "'");
    }
    return static_cast<std::size_t>(value);
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw UsageError("cannot read '" + path + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

Hma load(const std::string& path) { return parse_hma_or_throw(read_file(path), path); }

struct Invocation {
    RunConfig config;
    std::string mode_text = "spec";
    std::string strictness_text = "strict";
    std::vector<std::string> files;
    std::vector<std::string> rule;
    std::string script;
};

void add_common(CLI::App* sub, Invocation& inv, bool with_mode) {
    sub->add_option("--depth", inv.config.depth, "Enumeration bound (env HMA_DEPTH)");
    if (with_mode) {
        sub->add_option("--mode", inv.mode_text, "Semantics variant")->check(CLI::IsMember({"impl", "spec"}));
    }
    sub->add_option("--strictness", inv.strictness_text, "Context-condition strictness")
        ->check(CLI::IsMember({"lenient", "strict"}));
    sub->add_option("--chaos-cap", inv.config.chaos_cap, "Maximum transitions after chaos completion (env HMA_CHAOS_CAP)")
        ->check(CLI::PositiveNumber);
    sub->add_option("--trace-cap", inv.config.trace_cap, "Maximum enumerated traces (env HMA_TRACE_CAP)")
        ->check(CLI::PositiveNumber);
    sub->add_option("-o,--output", inv.config.output, "Write data here instead of standard output");
}

class Runner {
public:
    Runner(Invocation inv, std::ostream& out) : inv_(std::move(inv)), out_(out) {
        inv_.config.mode = inv_.mode_text == "impl" ? Mode::impl : Mode::spec;
        inv_.config.strictness = inv_.strictness_text == "lenient" ? Strictness::lenient : Strictness::strict;
    }

    int check() {
        const auto h = load(inv_.files.at(0));
        const auto diagnostics = check_context_conditions(h, cfg().strictness);
        std::string text;
        for (const auto& d : diagnostics) text += to_string(d) + "\n";
        emit(text);
        return has_errors(diagnostics) ? exit_code::usage : exit_code::ok;
    }

    int flatten_cmd() {
        emit(serialize_ma(flatten(admitted(inv_.files.at(0)))));
        return exit_code::ok;
    }

    int complete_cmd() {
        const auto flat = flatten(admitted(inv_.files.at(0)));
        emit(serialize_ma(cfg().mode == Mode::impl ? complete_ignore(flat) : complete_chaos(flat, cfg().chaos_cap)));
        return exit_code::ok;
    }

    int behaviors_cmd() {
        emit(serialize_traces(semantics(load(inv_.files.at(0)))));
        return exit_code::ok;
    }

    int refines() {
        const auto verdict = check_refinement(load(inv_.files.at(0)), load(inv_.files.at(1)), cfg().depth, caps());
        emit(to_string(verdict) + "\n");
        return verdict.relation == Relation::refines_up_to_depth ? exit_code::ok : exit_code::negative;
    }

    int consistent() {
        const auto h = load(inv_.files.at(0));
        require_context_conditions(h, cfg().strictness);
        const bool ok = is_consistent(h, cfg().depth, caps());
        emit(ok ? "consistent\n" : "inconsistent\n");
        return ok ? exit_code::ok : exit_code::negative;
    }

    int compose() {
        const auto a = semantics(load(inv_.files.at(0)));
        const auto b = semantics(load(inv_.files.at(1)));
        emit(serialize_traces(trace_intersection(a, b)));
        return exit_code::ok;
    }

    int transform() {
        std::vector<RuleApplication> apps;
        if (!inv_.rule.empty()) {
            apps.push_back(make_rule(inv_.rule.front(), {inv_.rule.begin() + 1, inv_.rule.end()}));
        }
        if (!inv_.script.empty()) {
            auto more = parse_rule_script(read_file(inv_.script));
            apps.insert(apps.end(), more.begin(), more.end());
        }
        if (apps.empty()) throw UsageError("transform needs --rule NAME ARGS... or --script FILE");

        const auto original = load(inv_.files.at(0));
        auto current = original;
        std::string verdicts;
        bool sound = true;
        for (const auto& app : apps) {
            const auto verdict = verify_rule_soundness(current, app, cfg().depth, caps());
            sound = sound && verdict.relation == Relation::refines_up_to_depth;
            verdicts += "// " + to_string(app) + ": " + to_string(verdict) + "\n";
            current = apply_rule(current, app);
        }
        if (apps.size() > 1) {
            verdicts += "// overall: " + to_string(check_refinement(current, original, cfg().depth, caps())) + "\n";
        }
        emit(serialize_hma(current) + verdicts);
        return sound ? exit_code::ok : exit_code::negative;
    }

private:
    const RunConfig& cfg() const { return inv_.config; }
    Caps caps() const { return Caps{cfg().chaos_cap, cfg().trace_cap}; }

    Hma admitted(const std::string& path) {
        auto h = load(path);
        require_context_conditions(h, cfg().strictness);
        return h;
    }

    TraceSet semantics(const Hma& h) {
        const SemanticsOptions options{cfg().strictness, caps()};
        return cfg().mode == Mode::impl ? semantics_impl(h, cfg().depth, options)
                                        : semantics_spec(h, cfg().depth, options);
    }

    void emit(const std::string& text) {
        if (cfg().output.empty()) {
            out_ << text;
            return;
        }
        std::ofstream file(cfg().output, std::ios::binary);
        if (!file) throw UsageError("cannot write '" + cfg().output + "'");
        file << text;
    }

    Invocation inv_;
    std::ostream& out_;
};

}  // namespace

std::optional<std::string> process_env(std::string_view name) {
    if (const char* value = std::getenv(std::string(name).c_str())) return std::string(value);
    return std::nullopt;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err, const EnvLookup& env) {
    Invocation inv;
    try {
        if (auto v = env("HMA_DEPTH")) inv.config.depth = parse_natural(*v, "HMA_DEPTH");
        if (auto v = env("HMA_CHAOS_CAP")) inv.config.chaos_cap = parse_natural(*v, "HMA_CHAOS_CAP");
        if (auto v = env("HMA_TRACE_CAP")) inv.config.trace_cap = parse_natural(*v, "HMA_TRACE_CAP");
        if (inv.config.chaos_cap == 0 || inv.config.trace_cap == 0) throw UsageError("caps must be positive");
    } catch (const UsageError& e) {
        err << "hma: " << e.what() << "\n";
        return exit_code::usage;
    }

    CLI::App app{"Hierarchical Mealy automata workbench", "hma"};
    app.require_subcommand(1);

    auto* check = app.add_subcommand("check", "Report context-condition diagnostics");
    check->add_option("file", inv.files, "Document")->required()->expected(1);
    add_common(check, inv, false);

    auto* flatten_sub = app.add_subcommand("flatten", "Remove the state hierarchy");
    flatten_sub->add_option("file", inv.files, "Document")->required()->expected(1);
    add_common(flatten_sub, inv, false);

    auto* complete = app.add_subcommand("complete", "Flatten and complete (ignore for impl, chaos for spec)");
    complete->add_option("file", inv.files, "Document")->required()->expected(1);
    add_common(complete, inv, true);

    auto* behaviors_sub = app.add_subcommand("behaviors", "Enumerate traces up to --depth");
    behaviors_sub->add_option("file", inv.files, "Document")->required()->expected(1);
    add_common(behaviors_sub, inv, true);

    auto* refines = app.add_subcommand("refines", "Check that REFINER's specification traces are within REFINED's");
    refines->add_option("files", inv.files, "REFINER REFINED")->required()->expected(2);
    add_common(refines, inv, true);

    auto* consistent = app.add_subcommand("consistent", "Check that the specification semantics is nonempty");
    consistent->add_option("file", inv.files, "Document")->required()->expected(1);
    add_common(consistent, inv, false);

    auto* compose = app.add_subcommand("compose", "Intersect the trace sets of two documents");
    compose->add_option("files", inv.files, "FILE1 FILE2")->required()->expected(2);
    add_common(compose, inv, true);

    auto* transform = app.add_subcommand("transform", "Apply a rule and verify that the result refines the input");
    transform->add_option("file", inv.files, "Document")->required()->expected(1);
    transform->add_option("--rule", inv.rule, "NAME ARGS...")->expected(1, -1);
    transform->add_option("--script", inv.script, "File with one rule application per line");
    add_common(transform, inv, false);

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, err, err);
        return exit_code::usage;
    }

    try {
        if (refines->parsed() && inv.mode_text == "impl") {
            throw UsageError("refines compares specification semantics only; --mode impl is not supported");
        }
        Runner runner(std::move(inv), out);
        if (check->parsed()) return runner.check();
        if (flatten_sub->parsed()) return runner.flatten_cmd();
        if (complete->parsed()) return runner.complete_cmd();
        if (behaviors_sub->parsed()) return runner.behaviors_cmd();
        if (refines->parsed()) return runner.refines();
        if (consistent->parsed()) return runner.consistent();
        if (compose->parsed()) return runner.compose();
        return runner.transform();
    } catch (const ParseFailure& e) {
        for (const auto& pe : e.errors()) err << to_string(pe) << "\n";
        return exit_code::usage;
    } catch (const CapExceeded& e) {
        err << "hma: " << e.what() << "\n";
        return exit_code::cap;
    } catch (const Error& e) {
        err << "hma: " << e.what() << "\n";
        return exit_code::usage;
    }
}

}  // namespace hma::cli
