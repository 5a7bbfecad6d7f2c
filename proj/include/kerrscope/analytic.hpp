#pragma once

#include <optional>
#include <string>
#include <vector>

#include "kerrscope/model.hpp"

namespace kerrscope {

// Steady-state photon-number distribution. q_max = probs.size() - 1 is 2s
// for the closed-form route and fock_dim - 1 for the master-equation route.
struct PhotonDistribution {
    std::vector<double> probs;

    int q_max() const { return static_cast<int>(probs.size()) - 1; }
};

// mean_n = sum q P_q, g2_unnorm = G2(0) = sum q(q-1) P_q,
// g2 = G2(0) / mean_n^2 (undefined at mean_n = 0).
struct ScalarObservables {
    double mean_n = 0.0;
    double g2_unnorm = 0.0;
    std::optional<double> g2;
};

// ln C_mm for the closed-form distribution,
//
//   C_mm = |sigma|^(-2m) |Gamma(1+m+i phi*) / [m! Gamma(1+i phi*)]|^2 .
//
// Evaluated without a complex-Gamma routine: the Gamma ratio collapses to
// the finite product prod_{k=1..m} (k + i phi*), so
//
//   ln C_mm = -2m ln|sigma| + sum_{k=1..m} ln[(k + Im phi)^2 + (Re phi)^2]
//             - 2 ln(m!) .
//
// Throws std::invalid_argument for m < 0 or for m > 0 at zero drive
// (|sigma| = 0); callers handle the undriven case separately.
double log_cmm(const ScaledParams& scaled, int m);

// ln Z by the closed-form sum over m; used as a cross-check against direct
// renormalization of the unnormalized P_q.
double log_partition_explicit(const ScaledParams& scaled);

// Closed-form steady-state distribution, all arithmetic in log domain with
// log-sum-exp. Zero drive returns the vacuum distribution. Throws
// std::overflow_error if any intermediate log term is non-finite and
// std::runtime_error if the two partition-function routes disagree beyond
// 1e-10 relative (both indicate a bug, not a parameter problem).
PhotonDistribution photon_distribution(const ScaledParams& scaled);

ScalarObservables observables(const PhotonDistribution& dist);

// Zero-nonlinearity closed form: mean_n = epsilon^2/(kappa^2 + delta^2),
// Poissonian statistics (g2 = 1 whenever epsilon > 0).
ScalarObservables linear_limit(const ModelParams& params);

// Human-readable warnings when the closed form is used outside the regime
// it approximates well (strong drive, or occupation no longer small against
// 2s). Empty in the intended regime.
std::vector<std::string> regime_warnings(const ScaledParams& scaled, double mean_n);

} // namespace kerrscope
