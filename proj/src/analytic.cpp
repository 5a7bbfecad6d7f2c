#include "kerrscope/analytic.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace kerrscope {

namespace {

std::vector<double> log_factorial_table(int n_max) {
    std::vector<double> table(static_cast<size_t>(n_max) + 1);
    for (int n = 0; n <= n_max; ++n) {
        table[static_cast<size_t>(n)] = std::lgamma(static_cast<double>(n) + 1.0);
    }
    return table;
}

double log_sum_exp(const std::vector<double>& terms) {
    double peak = -std::numeric_limits<double>::infinity();
    for (double t : terms) {
        peak = std::max(peak, t);
    }
    if (!std::isfinite(peak)) {
        return peak;
    }
    double acc = 0.0;
    for (double t : terms) {
        acc += std::exp(t - peak);
    }
    return peak + std::log(acc);
}

// ln C_mm for m = 0..m_max by accumulating the Gamma-ratio product:
// each step multiplies by |m + i phi*|^2 / (|sigma|^2 m^2), where
// |m + i phi*|^2 = (m + Im phi)^2 + (Re phi)^2.
std::vector<double> log_cmm_table(const ScaledParams& scaled, int m_max) {
    std::vector<double> lnc(static_cast<size_t>(m_max) + 1, 0.0);
    if (m_max == 0) {
        return lnc;
    }
    const double abs_sigma = std::abs(scaled.sigma);
    if (!(abs_sigma > 0.0)) {
        throw std::invalid_argument("C_mm with m > 0 requires a nonzero drive");
    }
    const double log_abs_sigma = std::log(abs_sigma);
    const double re = scaled.phi.real();
    const double im = scaled.phi.imag();
    for (int m = 1; m <= m_max; ++m) {
        const double shifted = static_cast<double>(m) + im;
        lnc[static_cast<size_t>(m)] = lnc[static_cast<size_t>(m) - 1]
            - 2.0 * log_abs_sigma
            + std::log(shifted * shifted + re * re)
            - 2.0 * std::log(static_cast<double>(m));
    }
    return lnc;
}

// ln of the closed-form partition sum
// Z = sum_m C_mm (2s+m+1)! (m!)^2 / [(2s-m)! (2m+1)!].
double log_partition_from_tables(const std::vector<double>& lnc,
                                 const std::vector<double>& lf, int two_s) {
    std::vector<double> terms(static_cast<size_t>(two_s) + 1);
    for (int m = 0; m <= two_s; ++m) {
        terms[static_cast<size_t>(m)] = lnc[static_cast<size_t>(m)]
            + lf[static_cast<size_t>(two_s + m + 1)]
            + 2.0 * lf[static_cast<size_t>(m)]
            - lf[static_cast<size_t>(two_s - m)]
            - lf[static_cast<size_t>(2 * m + 1)];
    }
    return log_sum_exp(terms);
}

} // namespace

double log_cmm(const ScaledParams& scaled, int m) {
    if (m < 0) {
        throw std::invalid_argument("C_mm index must be >= 0, got " + std::to_string(m));
    }
    return log_cmm_table(scaled, m).back();
}

double log_partition_explicit(const ScaledParams& scaled) {
    const int two_s = scaled.two_s;
    const auto lnc = log_cmm_table(scaled, two_s);
    const auto lf = log_factorial_table(4 * two_s + 2);
    return log_partition_from_tables(lnc, lf, two_s);
}

PhotonDistribution photon_distribution(const ScaledParams& scaled) {
    const int two_s = scaled.two_s;
    if (two_s < 1) {
        throw std::invalid_argument("two_s must be >= 1");
    }

    PhotonDistribution dist;
    dist.probs.assign(static_cast<size_t>(two_s) + 1, 0.0);

    if (scaled.omega == 0.0) {
        dist.probs[0] = 1.0;
        return dist;
    }

    const auto lnc = log_cmm_table(scaled, two_s);
    const auto lf = log_factorial_table(4 * two_s + 2);

    // Unnormalized ln P_q: log-sum-exp over m of
    // ln C_mm + ln[(q+m)! (2s-q)! / (q! (2s-q-m)!)].
    std::vector<double> lnp(static_cast<size_t>(two_s) + 1);
    std::vector<double> terms;
    terms.reserve(static_cast<size_t>(two_s) + 1);
    for (int q = 0; q <= two_s; ++q) {
        terms.clear();
        for (int m = 0; m <= two_s - q; ++m) {
            terms.push_back(lnc[static_cast<size_t>(m)]
                            + lf[static_cast<size_t>(q + m)]
                            + lf[static_cast<size_t>(two_s - q)]
                            - lf[static_cast<size_t>(q)]
                            - lf[static_cast<size_t>(two_s - q - m)]);
        }
        lnp[static_cast<size_t>(q)] = log_sum_exp(terms);
        if (!std::isfinite(lnp[static_cast<size_t>(q)])) {
            throw std::overflow_error("non-finite log term in photon distribution at q=" +
                                      std::to_string(q));
        }
    }

    const double ln_z_direct = log_sum_exp(lnp);
    const double ln_z_explicit = log_partition_from_tables(lnc, lf, two_s);
    const double rel_mismatch = std::abs(std::expm1(ln_z_explicit - ln_z_direct));
    if (!(rel_mismatch <= 1e-10)) {
        throw std::runtime_error(
            "partition-function cross-check failed: explicit and renormalized Z differ by " +
            std::to_string(rel_mismatch) + " relative");
    }

    for (int q = 0; q <= two_s; ++q) {
        dist.probs[static_cast<size_t>(q)] =
            std::exp(lnp[static_cast<size_t>(q)] - ln_z_direct);
    }
    return dist;
}

ScalarObservables observables(const PhotonDistribution& dist) {
    ScalarObservables obs;
    for (int q = 0; q <= dist.q_max(); ++q) {
        const double p = dist.probs[static_cast<size_t>(q)];
        obs.mean_n += q * p;
        obs.g2_unnorm += static_cast<double>(q) * (q - 1) * p;
    }
    if (obs.mean_n > 0.0) {
        obs.g2 = obs.g2_unnorm / (obs.mean_n * obs.mean_n);
    }
    return obs;
}

ScalarObservables linear_limit(const ModelParams& params) {
    ScalarObservables obs;
    const double denom = params.kappa * params.kappa + params.delta * params.delta;
    obs.mean_n = params.epsilon * params.epsilon / denom;
    obs.g2_unnorm = obs.mean_n * obs.mean_n;
    if (params.epsilon > 0.0) {
        obs.g2 = 1.0;
    }
    return obs;
}

std::vector<std::string> regime_warnings(const ScaledParams& scaled, double mean_n) {
    std::vector<std::string> warnings;
    if (scaled.omega >= scaled.alpha) {
        warnings.push_back("drive is not weak (omega >= alpha); "
                           "closed-form peak magnitudes are only approximate");
    }
    if (mean_n > 0.02 * scaled.two_s) {
        warnings.push_back("mean occupation exceeds 2% of 2s; "
                           "the effective-spin truncation is marginal");
    }
    return warnings;
}

} // namespace kerrscope
