#pragma once

#include <stdexcept>
#include <string>

namespace utpc {

/// Thrown on violated preconditions and failed internal checks.
struct Error : std::runtime_error {
    explicit Error(const std::string & msg) : std::runtime_error(msg) {}
};

/// Thrown when an exhaustive search runs past its node budget. The result
/// obtained so far is discarded rather than returned as if complete.
struct BudgetExceeded : Error {
    unsigned long long nodes;
    explicit BudgetExceeded(unsigned long long n) :
        Error("search node budget exceeded after " + std::to_string(n) + " nodes (partial result discarded)"),
        nodes(n) {}
};

inline void require(bool cond, const std::string & msg)
{
    if (!cond)
        throw Error(msg);
}

}
