#pragma once

#include <stdexcept>
#include <string>

namespace fsasl {

// Error taxonomy mirrored by the CLI exit codes and the "kind" field of the
// machine-readable error JSON.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Unreadable or malformed input files.
struct IoError : Error {
    using Error::Error;
};

// Invalid parameters, shapes, or violated data invariants.
struct ConfigError : Error {
    using Error::Error;
};

// A numerical subproblem failed (non-convergence, singular system).
struct SolverError : Error {
    explicit SolverError(const std::string& msg, long column = -1, long iteration = -1)
        : Error(msg), column(column), iteration(iteration) {}

    long column;     // offending column/row index, -1 if not applicable
    long iteration;  // outer-iteration index, -1 if not applicable
};

}  // namespace fsasl
