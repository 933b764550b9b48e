#pragma once

#include <stdexcept>
#include <string>

namespace steiner {

/// Base class for all errors raised by the library.
struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Bad input: malformed files, caps exceeded, preconditions violated by the caller.
struct UsageError : Error {
    explicit UsageError(const std::string& what) : Error(what) {}
};

/// A verified mathematical invariant failed.  This never indicates bad input;
/// it falsifies the implementation (or, for a few clearly marked checks, the
/// theory being tested) and carries the offending certificate in the message.
struct InvariantViolation : Error {
    explicit InvariantViolation(const std::string& what) : Error(what) {}
};

} // namespace steiner
