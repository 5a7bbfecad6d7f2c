#pragma once

#include <optional>
#include <string>
#include <vector>

#include "kerrscope/lindblad.hpp"
#include "kerrscope/model.hpp"

namespace kerrscope {

enum class Engine { Analytic, Numeric };

const char* to_string(Engine engine);

// Uniform grid of `steps` points from min to max inclusive.
struct GridSpec {
    double min = 0.0;
    double max = 1.0;
    int steps = 2;

    // Throws std::invalid_argument unless min < max, steps >= 2, finite.
    void validate() const;
    std::vector<double> values() const;
};

struct SweepRow {
    double mean_n = 0.0;
    std::optional<double> g2;
    std::optional<double> phi_plus;
    std::optional<double> phi_minus;
};

// One observable row per grid point, in axis order. Fidelities are present
// only for the Numeric engine (the closed form has no off-diagonals).
struct SweepResult {
    std::string axis_name;
    std::vector<double> axis;
    std::vector<SweepRow> rows;
    Engine engine = Engine::Analytic;
};

struct SweepConfig {
    Engine engine = Engine::Analytic;
    int two_s = 50;      // spin size for the Analytic engine; Numeric ignores it
    FockConfig fock{};   // truncation for the Numeric engine; Analytic ignores it
};

// Single-point evaluation used by both sweeps and the CLI `point` command.
SweepRow evaluate_point(const ModelParams& params, const SweepConfig& cfg);

// Evaluate with params.delta (resp. the drive, via epsilon = omega*sqrt(2s))
// replaced by each grid value. Grid points are independent and are solved in
// parallel; rows are assembled in axis order and are bitwise-identical to a
// serial evaluation regardless of worker count. Solver errors are rethrown
// annotated with the failing grid point.
SweepResult sweep_detuning(const ModelParams& params, const GridSpec& grid,
                           const SweepConfig& cfg);
SweepResult sweep_drive(const ModelParams& params, const GridSpec& omega_grid,
                        const SweepConfig& cfg);

// Single-threaded twins kept as the determinism reference for tests and
// benchmarks.
namespace reference {
SweepResult sweep_detuning_serial(const ModelParams& params, const GridSpec& grid,
                                  const SweepConfig& cfg);
SweepResult sweep_drive_serial(const ModelParams& params, const GridSpec& omega_grid,
                               const SweepConfig& cfg);
} // namespace reference

// Positions of strict local maxima of mean_n whose topographic prominence
// (height above the higher flanking minimum) reaches min_prominence, each
// refined by parabolic interpolation through its three surrounding samples.
// Increasing order; empty when nothing qualifies.
std::vector<double> detect_peaks(const SweepResult& result, double min_prominence);

struct PeakEstimate {
    std::vector<double> peak_positions;
    std::vector<double> spacings;
    double alpha_hat = 0.0;  // median spacing
    double spread = 0.0;     // max |spacing - median|
};

// Nonlinearity estimate from consecutive peak spacings. Throws
// InsufficientPeaksError with fewer than two peaks.
PeakEstimate estimate_alpha(const std::vector<double>& peaks);

// Detunings where the n-photon transitions are resonant,
// delta = -alpha(m+n-1) over 0 <= n < m <= max_order for Attractive (the
// negated set for Repulsive), sorted increasing.
std::vector<double> predict_resonances(double alpha, NonlinearSign sign, int max_order);

} // namespace kerrscope
