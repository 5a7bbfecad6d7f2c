#include "kerrscope/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <set>
#include <stdexcept>

#include "kerrscope/analytic.hpp"
#include "kerrscope/csv.hpp"

namespace kerrscope {

const char* to_string(Engine engine) {
    return engine == Engine::Analytic ? "analytic" : "numeric";
}

void GridSpec::validate() const {
    if (!std::isfinite(min) || !std::isfinite(max)) {
        throw std::invalid_argument("grid bounds must be finite");
    }
    if (!(min < max)) {
        throw std::invalid_argument("grid min must be strictly below max");
    }
    if (steps < 2) {
        throw std::invalid_argument("grid needs at least 2 steps, got " +
                                    std::to_string(steps));
    }
}

std::vector<double> GridSpec::values() const {
    validate();
    std::vector<double> v(static_cast<size_t>(steps));
    const double h = (max - min) / (steps - 1);
    for (int i = 0; i < steps; ++i) {
        v[static_cast<size_t>(i)] = min + i * h;
    }
    v.back() = max;
    return v;
}

SweepRow evaluate_point(const ModelParams& params, const SweepConfig& cfg) {
    SweepRow row;
    if (cfg.engine == Engine::Analytic) {
        const ScalarObservables obs = observables(photon_distribution(scale(params, cfg.two_s)));
        row.mean_n = obs.mean_n;
        row.g2 = obs.g2;
    } else {
        const NumericObservables full = observables_full(steady_state(params, cfg.fock));
        row.mean_n = full.scalars.mean_n;
        row.g2 = full.scalars.g2;
        row.phi_plus = full.fidelity.phi_plus;
        row.phi_minus = full.fidelity.phi_minus;
    }
    return row;
}

namespace {

enum class FailureKind { NoConvergence, Singular, Instability, Runtime };

SweepResult sweep_impl(const ModelParams& base, const GridSpec& grid, const SweepConfig& cfg,
                       bool over_drive, bool parallel) {
    base.validate();
    grid.validate();
    if (cfg.engine == Engine::Numeric) {
        cfg.fock.validate();
    }
    if (over_drive && grid.min < 0.0) {
        throw std::invalid_argument("drive grid values must be >= 0");
    }

    const std::vector<double> axis = grid.values();
    const int n = static_cast<int>(axis.size());
    std::vector<SweepRow> rows(axis.size());

    // First failure wins; remaining points still finish so the capture is a
    // plain flag rather than a cancellation protocol.
    std::mutex failure_mutex;
    bool failed = false;
    FailureKind kind = FailureKind::Runtime;
    std::string message;

    const double root_two_s = std::sqrt(static_cast<double>(cfg.two_s));
    auto body = [&](int i) {
        try {
            ModelParams point = base;
            if (over_drive) {
                point.epsilon = axis[static_cast<size_t>(i)] * root_two_s;
            } else {
                point.delta = axis[static_cast<size_t>(i)];
            }
            rows[static_cast<size_t>(i)] = evaluate_point(point, cfg);
        } catch (const std::exception& e) {
            std::lock_guard<std::mutex> hold(failure_mutex);
            if (!failed) {
                failed = true;
                if (dynamic_cast<const NoConvergenceError*>(&e) != nullptr) {
                    kind = FailureKind::NoConvergence;
                } else if (dynamic_cast<const SingularSystemError*>(&e) != nullptr) {
                    kind = FailureKind::Singular;
                } else if (dynamic_cast<const InstabilityError*>(&e) != nullptr) {
                    kind = FailureKind::Instability;
                } else {
                    kind = FailureKind::Runtime;
                }
                message = "at " + std::string(over_drive ? "omega" : "delta") + "=" +
                          format_double(axis[static_cast<size_t>(i)]) + ": " + e.what();
            }
        }
    };

    if (parallel) {
#pragma omp parallel for schedule(dynamic)
        for (int i = 0; i < n; ++i) {
            body(i);
        }
    } else {
        for (int i = 0; i < n; ++i) {
            body(i);
        }
    }

    if (failed) {
        switch (kind) {
            case FailureKind::NoConvergence: throw NoConvergenceError(message);
            case FailureKind::Singular: throw SingularSystemError(message);
            case FailureKind::Instability: throw InstabilityError(message);
            case FailureKind::Runtime: break;
        }
        throw std::runtime_error(message);
    }

    SweepResult result;
    result.axis_name = over_drive ? "omega" : "delta";
    result.axis = axis;
    result.rows = std::move(rows);
    result.engine = cfg.engine;
    return result;
}

} // namespace

SweepResult sweep_detuning(const ModelParams& params, const GridSpec& grid,
                           const SweepConfig& cfg) {
    return sweep_impl(params, grid, cfg, /*over_drive=*/false, /*parallel=*/true);
}

SweepResult sweep_drive(const ModelParams& params, const GridSpec& omega_grid,
                        const SweepConfig& cfg) {
    return sweep_impl(params, omega_grid, cfg, /*over_drive=*/true, /*parallel=*/true);
}

namespace reference {

SweepResult sweep_detuning_serial(const ModelParams& params, const GridSpec& grid,
                                  const SweepConfig& cfg) {
    return sweep_impl(params, grid, cfg, /*over_drive=*/false, /*parallel=*/false);
}

SweepResult sweep_drive_serial(const ModelParams& params, const GridSpec& omega_grid,
                               const SweepConfig& cfg) {
    return sweep_impl(params, omega_grid, cfg, /*over_drive=*/true, /*parallel=*/false);
}

} // namespace reference

std::vector<double> detect_peaks(const SweepResult& result, double min_prominence) {
    if (!(min_prominence > 0.0)) {
        throw std::invalid_argument("min_prominence must be > 0");
    }
    const auto n = result.rows.size();
    if (n < 3 || result.axis.size() != n) {
        throw std::invalid_argument("peak detection needs at least 3 sweep points");
    }

    auto height = [&](size_t i) { return result.rows[i].mean_n; };

    std::vector<double> peaks;
    for (size_t i = 1; i + 1 < n; ++i) {
        const double y = height(i);
        if (!(y > height(i - 1)) || !(y > height(i + 1))) {
            continue;
        }

        // Topographic prominence: walk outward while strictly below the peak,
        // tracking the lowest point reached on each side; the reference level
        // is the higher of those two minima (grid edges count as minima).
        double left_min = y;
        for (size_t j = i; j-- > 0;) {
            left_min = std::min(left_min, height(j));
            if (height(j) >= y) {
                break;
            }
        }
        double right_min = y;
        for (size_t j = i + 1; j < n; ++j) {
            right_min = std::min(right_min, height(j));
            if (height(j) >= y) {
                break;
            }
        }
        const double prominence = y - std::max(left_min, right_min);
        if (prominence < min_prominence) {
            continue;
        }

        const double ym = height(i - 1);
        const double yp = height(i + 1);
        const double curvature = ym - 2.0 * y + yp;
        const double offset = (curvature < 0.0) ? 0.5 * (ym - yp) / curvature : 0.0;
        const double h = 0.5 * (result.axis[i + 1] - result.axis[i - 1]);
        peaks.push_back(result.axis[i] + offset * h);
    }
    return peaks;
}

PeakEstimate estimate_alpha(const std::vector<double>& peaks) {
    if (peaks.size() < 2) {
        throw InsufficientPeaksError("alpha estimation needs at least 2 peaks, found " +
                                     std::to_string(peaks.size()));
    }
    PeakEstimate est;
    est.peak_positions = peaks;
    std::sort(est.peak_positions.begin(), est.peak_positions.end());

    est.spacings.resize(est.peak_positions.size() - 1);
    for (size_t i = 0; i + 1 < est.peak_positions.size(); ++i) {
        est.spacings[i] = est.peak_positions[i + 1] - est.peak_positions[i];
    }

    std::vector<double> sorted = est.spacings;
    std::sort(sorted.begin(), sorted.end());
    const size_t mid = sorted.size() / 2;
    est.alpha_hat = (sorted.size() % 2 == 1) ? sorted[mid]
                                             : 0.5 * (sorted[mid - 1] + sorted[mid]);

    est.spread = 0.0;
    for (double s : est.spacings) {
        est.spread = std::max(est.spread, std::abs(s - est.alpha_hat));
    }
    return est;
}

std::vector<double> predict_resonances(double alpha, NonlinearSign sign, int max_order) {
    if (max_order < 1) {
        throw std::invalid_argument("max_order must be >= 1");
    }
    if (!(alpha >= 0.0) || !std::isfinite(alpha)) {
        throw std::invalid_argument("alpha must be finite and >= 0");
    }
    const double direction = (sign == NonlinearSign::Attractive) ? -1.0 : 1.0;
    std::set<double> positions;
    for (int m = 1; m <= max_order; ++m) {
        for (int n = 0; n < m; ++n) {
            positions.insert(direction * alpha * (m + n - 1.0));
        }
    }
    return std::vector<double>(positions.begin(), positions.end());
}

} // namespace kerrscope
