#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace hma {

struct Diagnostic;

/// Base class for every failure raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A document violates a structural invariant or a context condition.
/// Carries the offending diagnostics when they come from a context check.
class MalformedDocument : public Error {
public:
    explicit MalformedDocument(const std::string& what, std::vector<Diagnostic> diagnostics = {});
    const std::vector<Diagnostic>& diagnostics() const noexcept { return diagnostics_; }

private:
    std::vector<Diagnostic> diagnostics_;
};

class UnknownState : public Error {
public:
    using Error::Error;
};

/// A size guard tripped: chaos expansion or trace enumeration grew past its cap.
class CapExceeded : public Error {
public:
    using Error::Error;
};

class DepthMismatch : public Error {
public:
    using Error::Error;
};

class AlphabetMismatch : public Error {
public:
    using Error::Error;
};

/// A transformation rule was applied where its context condition does not hold.
class RuleConditionViolated : public Error {
public:
    using Error::Error;
};

}  // namespace hma
