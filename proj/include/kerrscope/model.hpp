#pragma once

#include <complex>

namespace kerrscope {

// Sign of the Kerr term in H = -delta a^+a -/+ alpha a^+a^+aa + epsilon(a^+ + a):
// Attractive uses the minus sign (self-focusing), Repulsive the plus sign.
enum class NonlinearSign { Attractive, Repulsive };

const char* to_string(NonlinearSign sign);

// Physical parameters in absolute (angular-frequency) units.
//
//   delta    pump-cavity detuning; any sign
//   alpha    Kerr nonlinearity per photon pair, >= 0
//   epsilon  coherent drive amplitude, >= 0
//   kappa    amplitude damping rate, > 0; photon number decays at 2*kappa
struct ModelParams {
    double delta = 0.0;
    double alpha = 1.0;
    double epsilon = 0.0;
    double kappa = 1.0;
    NonlinearSign sign = NonlinearSign::Attractive;

    // Throws std::invalid_argument on non-finite or out-of-range values.
    void validate() const;
};

// The same model mapped onto an effective spin of size s (dimension 2s+1):
// omega = epsilon / sqrt(2s), gamma = kappa / 2s, plus the two derived
// complex parameters the closed-form photon distribution is built from,
//
//   sigma = omega / (gamma + i*alpha)            [Attractive]
//   phi   = (2s*alpha + delta) / (gamma + i*alpha)
//
//   sigma = omega / (gamma - i*alpha)            [Repulsive]
//   phi   = -(2s*alpha - delta) / (gamma - i*alpha)
//
// This branch pairing is the one that reproduces the master-equation steady
// state (the alternatives are off at order unity in <n>); with it the
// repulsive oscillator at detuning -delta has exactly the attractive
// photon statistics at +delta.
struct ScaledParams {
    int two_s = 1;
    double omega = 0.0;
    double gamma = 0.0;
    double delta = 0.0;
    double alpha = 0.0;
    NonlinearSign sign = NonlinearSign::Attractive;
    std::complex<double> sigma;
    std::complex<double> phi;
};

// Throws std::invalid_argument if two_s < 1 (after params.validate()).
ScaledParams scale(const ModelParams& params, int two_s);

// Exact inverse of scale() up to floating-point roundoff.
ModelParams unscale(const ScaledParams& scaled);

} // namespace kerrscope
