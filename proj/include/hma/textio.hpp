#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hma/behavior.hpp"
#include "hma/core.hpp"

namespace hma {

struct SourceSpan {
    std::string file;
    std::size_t line = 1;
    std::size_t column = 1;
    std::size_t length = 0;
    bool operator==(const SourceSpan&) const = default;
};

struct ParseError {
    SourceSpan span;
    std::string expected;
    std::string found;
    bool operator==(const ParseError&) const = default;
};

/// `file:line:column: expected <expected>, found <found>`
std::string to_string(const ParseError& e);

class ParseFailure : public Error {
public:
    explicit ParseFailure(std::vector<ParseError> errors);
    const std::vector<ParseError>& errors() const noexcept { return errors_; }

private:
    std::vector<ParseError> errors_;
};

struct HmaParse {
    std::optional<Hma> document;
    std::vector<ParseError> errors;
    bool ok() const noexcept { return document.has_value(); }
};

/// Parses an `.hma` document. Context conditions are not checked here, so a
/// successfully parsed document may still be rejected by check_context_conditions.
/// Reports every recoverable error with its span.
HmaParse parse_hma(std::string_view text, std::string_view file = "<input>");

/// As parse_hma, throwing ParseFailure on any error.
Hma parse_hma_or_throw(std::string_view text, std::string_view file = "<input>");

/// Canonical text: nested states sorted by name, inline `initial` markers,
/// transitions in lexicographic order. Throws MalformedDocument when the
/// containment is cyclic or a state has more than one immediate parent,
/// since nesting cannot express either.
std::string serialize_hma(const Hma& h);
std::string serialize_ma(const Ma& m);

/// Header `#traces depth N alphabet a b ...` then one canonical line per trace.
std::string serialize_traces(const TraceSet& t);

/// Throws ParseFailure on a malformed header or line, or an unknown message.
TraceSet parse_traces(std::string_view text, std::string_view file = "<input>");

}  // namespace hma
