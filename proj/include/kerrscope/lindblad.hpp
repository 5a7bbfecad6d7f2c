#pragma once

#include <Eigen/Dense>

#include "kerrscope/analytic.hpp"
#include "kerrscope/errors.hpp"
#include "kerrscope/model.hpp"

namespace kerrscope {

using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

// Fock-space truncation control. dim is the number of retained states
// |0>..|dim-1>; a steady-state solve whose population in the top two levels
// exceeds tail_tol is re-run at doubled dimension, up to max_dim.
struct FockConfig {
    int dim = 20;
    double tail_tol = 1e-10;
    int max_dim = 80;

    // Throws std::invalid_argument on dim < 2, tail_tol outside (0, 1),
    // or max_dim < dim.
    void validate() const;
};

struct DensityMatrix {
    ComplexMatrix rho;

    int dim() const { return static_cast<int>(rho.rows()); }
};

// Overlaps with the single-photon superposition states
// |Psi+-> = (|0> +- |1>)/sqrt(2):  Phi+- = (rho_00 + rho_11)/2 +- Re rho_01.
struct FidelityPair {
    double phi_plus = 0.0;
    double phi_minus = 0.0;
};

struct NumericObservables {
    ScalarObservables scalars;
    FidelityPair fidelity;
    PhotonDistribution distribution;
};

// Annihilation operator in the number basis: a|n> = sqrt(n)|n-1>.
ComplexMatrix build_annihilation(int dim);

// H = -delta a^+a -/+ alpha a^+a^+aa + epsilon (a^+ + a), truncated to dim
// states. Diagonal -delta*n -/+ alpha*n(n-1), drive on the first off-diagonals.
ComplexMatrix build_hamiltonian(const ModelParams& params, int dim);

// Generator of rho_dot = -i[H, rho] + kappa (2 a rho a^+ - a^+a rho - rho a^+a)
// as a dim^2 x dim^2 matrix acting on the column-stacked density matrix.
//
// The dissipator is 2*kappa*D[a]: the photon number decays at rate 2*kappa,
// and the zero-nonlinearity steady state has <n> = epsilon^2/(kappa^2+delta^2).
// Everything downstream (tail tolerances, the closed-form route's gamma =
// kappa/2s) assumes this normalization of kappa.
ComplexMatrix build_liouvillian(const ModelParams& params, int dim);

// Column stacking: vec(rho)[col*dim + row] = rho(row, col), the convention
// under which vec(A X B) = (B^T (x) A) vec(X).
ComplexVector vectorize(const ComplexMatrix& m);
ComplexMatrix unvectorize(const ComplexVector& v);

// Steady state of the master equation: solves L vec(rho) = 0 with the
// equation for rho_00 replaced by the unit-trace constraint, Hermitizes the
// result, and escalates the truncation per FockConfig. Throws
// NoConvergenceError (tail cap hit) or SingularSystemError (solve failed).
DensityMatrix steady_state(const ModelParams& params, const FockConfig& cfg);

// Fixed-step fourth-order Runge-Kutta integration of the master equation
// from rho0 for t_final (t_final = 0 returns rho0). Stability requires
// roughly dt * ||L|| < 1; a drift of the trace beyond 1e-6 from its initial
// value (or a non-finite trace) raises InstabilityError.
DensityMatrix evolve(const DensityMatrix& rho0, const ModelParams& params,
                     double dt, double t_final);

// mean_n and G2(0) from the diagonal, Phi+- from the 2x2 corner block,
// distribution = diagonal populations.
NumericObservables observables_full(const DensityMatrix& rho);

} // namespace kerrscope
