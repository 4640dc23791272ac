#pragma once

#include <stdexcept>
#include <string>

namespace einselect {

/// Failure categories. The numeric values double as CLI exit codes.
enum class ErrorCategory {
    invalid_argument = 1,
    config = 2,
    truncation = 3,
    quadrature = 4,
    degeneracy = 5,
};

class Error : public std::runtime_error {
public:
    Error(ErrorCategory category, const std::string& what)
        : std::runtime_error(what), category_(category) {}

    ErrorCategory category() const noexcept { return category_; }
    int exit_code() const noexcept { return static_cast<int>(category_); }

private:
    ErrorCategory category_;
};

inline const char* category_name(ErrorCategory c) {
    switch (c) {
        case ErrorCategory::invalid_argument: return "invalid_argument";
        case ErrorCategory::config: return "config";
        case ErrorCategory::truncation: return "truncation";
        case ErrorCategory::quadrature: return "quadrature";
        case ErrorCategory::degeneracy: return "degeneracy";
    }
    return "unknown";
}

[[noreturn]] inline void fail(ErrorCategory c, const std::string& what) { throw Error(c, what); }

inline void require(bool ok, const std::string& what) {
    if (!ok) fail(ErrorCategory::invalid_argument, what);
}

} // namespace einselect
