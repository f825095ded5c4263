#pragma once

#include <stdexcept>
#include <string>

namespace mellin {

enum class ErrorCode {
    InvalidArgument,
    Domain,
    StripViolation,
    UnsupportedDimension,
    UnsupportedStyle,
    NotPositiveDefinite,
    InfiniteIntegral,
    NonDecaying,
    NonConvergence,
    Overflow,
    Config,
};

inline const char* to_string(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::InvalidArgument: return "invalid-argument";
        case ErrorCode::Domain: return "domain-error";
        case ErrorCode::StripViolation: return "strip-violation";
        case ErrorCode::UnsupportedDimension: return "unsupported-dimension";
        case ErrorCode::UnsupportedStyle: return "unsupported-style";
        case ErrorCode::NotPositiveDefinite: return "matrix-not-positive-definite";
        case ErrorCode::InfiniteIntegral: return "infinite-integral";
        case ErrorCode::NonDecaying: return "non-decaying-integrand";
        case ErrorCode::NonConvergence: return "non-convergence";
        case ErrorCode::Overflow: return "overflow";
        case ErrorCode::Config: return "config-error";
    }
    return "unknown";
}

/// Base of every error raised by the library. The CLI maps `Config` to exit
/// code 2 and everything else to exit code 3.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

/// Raised when the boundary solver gives up; carries the last iterate.
class NonConvergenceError : public Error {
public:
    NonConvergenceError(const std::string& what, double last_iterate, double residual)
        : Error(ErrorCode::NonConvergence, what),
          last_iterate_(last_iterate), residual_(residual) {}

    double last_iterate() const noexcept { return last_iterate_; }
    double residual() const noexcept { return residual_; }

private:
    double last_iterate_;
    double residual_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
    throw Error(code, what);
}

}  // namespace mellin
