#pragma once

#include <stdexcept>
#include <string>

namespace hcv {

// Error taxonomy maps onto the CLI exit codes:
//   ValidationError (and children)  -> exit 2
//   SolverError (and children)      -> exit 3
//   DiagnosticError (and children)  -> exit 4
// InternalError signals a broken invariant inside the library itself and is
// never an expected runtime outcome.

struct ValidationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// argument outside mathematical domain (negative radius, R >= S, ...)
struct DomainError : ValidationError {
    using ValidationError::ValidationError;
};

// evaluation requested exactly on a singular point (axis weight, vortex node)
struct SingularPointError : ValidationError {
    using ValidationError::ValidationError;
};

struct SolverError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Newton failed to reach tolerance within the iteration budget
struct IterativeFailureError : SolverError {
    IterativeFailureError(const std::string& msg, double last_residual)
        : SolverError(msg), last_residual(last_residual) {}
    double last_residual;
};

// CG stagnated; carries a short residual-history trace for the error record
struct LinearSolverError : SolverError {
    LinearSolverError(const std::string& msg, std::string trace)
        : SolverError(msg), trace(std::move(trace)) {}
    std::string trace;
};

struct DiagnosticError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// far plateau not flat: the truncation radius is too small for the requested check
struct TruncationTooSmallError : DiagnosticError {
    using DiagnosticError::DiagnosticError;
};

struct InternalError : std::logic_error {
    using std::logic_error::logic_error;
};

}  // namespace hcv
