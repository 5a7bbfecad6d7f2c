#pragma once

#include <stdexcept>
#include <string>

namespace kerrscope {

// Base for failures of the steady-state / time-evolution machinery.
// The CLI maps these to exit code 2.
struct SolverError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Fock-space truncation could not be grown enough to push the occupation
// tail below the requested tolerance.
struct NoConvergenceError : SolverError {
    using SolverError::SolverError;
};

// The linear system for the steady state is (numerically) singular.
struct SingularSystemError : SolverError {
    using SolverError::SolverError;
};

// Fixed-step integration lost trace normalization, i.e. the step size is
// too large for the spectral radius of the generator.
struct InstabilityError : SolverError {
    using SolverError::SolverError;
};

// Peak-based estimation needs at least two peaks; the CLI maps this to
// exit code 3.
struct InsufficientPeaksError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace kerrscope
