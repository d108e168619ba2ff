#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace crn {

// Exit codes shared by the library error types and the command line tool.
enum class ExitCode : int {
    ok = 0,
    config = 2,     // bad configuration or usage
    budget = 3,     // precision or iteration budget exceeded
    combinatorics = 4,  // combinatorial verification failed
};

struct Error : std::runtime_error {
    ExitCode code;
    Error(ExitCode c, const std::string& msg) : std::runtime_error(msg), code(c) {}
};

struct ConfigError : Error {
    explicit ConfigError(const std::string& msg) : Error(ExitCode::config, msg) {}
};

struct BudgetError : Error {
    explicit BudgetError(const std::string& msg) : Error(ExitCode::budget, msg) {}
};

struct CombinatoricsError : Error {
    explicit CombinatoricsError(const std::string& msg) : Error(ExitCode::combinatorics, msg) {}
};

// Thrown when an orbit closes up (or stalls): the map has, within working
// precision, a periodic orbit. Carries the finite continued fraction of the
// measured rotation number; an empty list encodes a stalled orbit (rotation
// number 0) and a single 0 encodes displacement >= 1 per step.
struct RationalRotationError : Error {
    std::vector<long long> quotients;
    RationalRotationError(std::vector<long long> q, const std::string& msg)
        : Error(ExitCode::combinatorics, msg), quotients(std::move(q)) {}
};

}  // namespace crn
