#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hma/behavior.hpp"

namespace hma::cli {

enum class Mode { impl, spec };

struct RunConfig {
    std::size_t depth = 3;
    Mode mode = Mode::spec;
    Strictness strictness = Strictness::strict;
    std::size_t chaos_cap = default_chaos_cap;
    std::size_t trace_cap = default_trace_cap;
    /// Empty means standard output.
    std::string output;
};

namespace exit_code {
inline constexpr int ok = 0;
inline constexpr int negative = 1;
inline constexpr int usage = 2;
inline constexpr int cap = 3;
}  // namespace exit_code

using EnvLookup = std::function<std::optional<std::string>(std::string_view)>;

/// Reads the real process environment.
std::optional<std::string> process_env(std::string_view name);

/// Runs one invocation. `args` excludes the program name. Data goes to `out`
/// (or the --output file), diagnostics and errors to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
        const EnvLookup& env = process_env);

}  // namespace hma::cli
