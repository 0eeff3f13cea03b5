#pragma once

#include <stdexcept>
#include <string>

namespace dgql {

// Error taxonomy mirrors the CLI exit codes: parse -> 2, precondition/semantic -> 3.
// Verification failures (d^2 != 0, iso check failed, ...) are reports, not exceptions.
struct ParseError : std::runtime_error {
    int line = 0;
    explicit ParseError(const std::string& msg, int ln = 0)
        : std::runtime_error(ln > 0 ? "line " + std::to_string(ln) + ": " + msg : msg), line(ln) {}
};

struct PreconditionError : std::runtime_error {
    int line = 0;
    explicit PreconditionError(const std::string& msg, int ln = 0)
        : std::runtime_error(ln > 0 ? "line " + std::to_string(ln) + ": " + msg : msg), line(ln) {}
};

// Cross-checks that can only fail on an implementation bug.
struct InternalError : std::logic_error {
    explicit InternalError(const std::string& msg) : std::logic_error(msg) {}
};

} // namespace dgql
