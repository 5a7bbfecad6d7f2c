#include "kerrscope/model.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace kerrscope {

const char* to_string(NonlinearSign sign) {
    return sign == NonlinearSign::Attractive ? "attractive" : "repulsive";
}

void ModelParams::validate() const {
    if (!std::isfinite(delta) || !std::isfinite(alpha) || !std::isfinite(epsilon) ||
        !std::isfinite(kappa)) {
        throw std::invalid_argument("model parameters must be finite");
    }
    if (alpha < 0.0) {
        throw std::invalid_argument("alpha must be >= 0 (its sign is carried separately)");
    }
    if (epsilon < 0.0) {
        throw std::invalid_argument("epsilon must be >= 0");
    }
    if (kappa <= 0.0) {
        throw std::invalid_argument("kappa must be > 0");
    }
}

ScaledParams scale(const ModelParams& params, int two_s) {
    params.validate();
    if (two_s < 1) {
        throw std::invalid_argument("two_s must be >= 1, got " + std::to_string(two_s));
    }

    ScaledParams s;
    s.two_s = two_s;
    s.omega = params.epsilon / std::sqrt(static_cast<double>(two_s));
    s.gamma = params.kappa / static_cast<double>(two_s);
    s.delta = params.delta;
    s.alpha = params.alpha;
    s.sign = params.sign;

    const double a = params.alpha;
    if (s.sign == NonlinearSign::Attractive) {
        const std::complex<double> denom(s.gamma, a);
        s.sigma = s.omega / denom;
        s.phi = (two_s * a + params.delta) / denom;
    } else {
        const std::complex<double> denom(s.gamma, -a);
        s.sigma = s.omega / denom;
        s.phi = -(two_s * a - params.delta) / denom;
    }
    return s;
}

ModelParams unscale(const ScaledParams& scaled) {
    ModelParams p;
    p.delta = scaled.delta;
    p.alpha = scaled.alpha;
    p.epsilon = scaled.omega * std::sqrt(static_cast<double>(scaled.two_s));
    p.kappa = scaled.gamma * static_cast<double>(scaled.two_s);
    p.sign = scaled.sign;
    return p;
}

} // namespace kerrscope
