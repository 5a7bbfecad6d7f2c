#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include <CLI11.hpp>

#include "kerrscope/analytic.hpp"
#include "kerrscope/csv.hpp"
#include "kerrscope/errors.hpp"
#include "kerrscope/lindblad.hpp"
#include "kerrscope/model.hpp"
#include "kerrscope/sweep.hpp"

namespace {

using namespace kerrscope;

// All frequency-like inputs (delta, omega/epsilon, gamma/kappa, grid bounds)
// are read in units of alpha; --alpha sets the absolute scale.
struct Options {
    double alpha = 1.0;
    std::optional<double> omega;
    std::optional<double> epsilon;
    std::optional<double> gamma;
    std::optional<double> kappa;
    int two_s = 50;
    double delta = 0.0;
    std::string sign = "attractive";
    std::string engine = "analytic";
    double grid_min = -7.0;
    double grid_max = 1.0;
    int steps = 1601;
    int fock_dim = 20;
    double tail_tol = 1e-10;
    int fock_max_dim = 80;
    double prominence = 0.02;
    std::string out_path;
};

void add_model_options(CLI::App* cmd, Options& o) {
    cmd->add_option("--alpha", o.alpha, "Kerr nonlinearity; absolute frequency scale for all other inputs")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    auto* omega = cmd->add_option("--omega", o.omega,
                                  "drive in spin-scaled form (epsilon = omega*sqrt(2s)) [default 0.06]");
    auto* epsilon = cmd->add_option("--epsilon", o.epsilon, "drive amplitude");
    omega->excludes(epsilon);
    epsilon->excludes(omega);
    auto* gamma = cmd->add_option("--gamma", o.gamma,
                                  "damping in spin-scaled form (kappa = gamma*2s) [default 1e-3]");
    auto* kappa = cmd->add_option("--kappa", o.kappa, "damping rate");
    gamma->excludes(kappa);
    kappa->excludes(gamma);
    cmd->add_option("--two-s", o.two_s, "effective spin size 2s")
        ->check(CLI::Range(1, 100000))
        ->capture_default_str();
    cmd->add_option("--delta", o.delta, "pump-cavity detuning")->capture_default_str();
    cmd->add_option("--sign", o.sign, "interaction sign")
        ->check(CLI::IsMember({"attractive", "repulsive"}))
        ->capture_default_str();
    cmd->add_option("--out", o.out_path, "write CSV to this path instead of standard output");
}

void add_engine_option(CLI::App* cmd, Options& o, bool allow_both) {
    std::vector<std::string> members = {"analytic", "numeric"};
    if (allow_both) {
        members.push_back("both");
    }
    cmd->add_option("--engine", o.engine, "evaluation route")
        ->check(CLI::IsMember(members))
        ->capture_default_str();
}

void add_grid_options(CLI::App* cmd, Options& o, double dmin, double dmax, int dsteps) {
    o.grid_min = dmin;
    o.grid_max = dmax;
    o.steps = dsteps;
    cmd->add_option("--min", o.grid_min, "grid start")->capture_default_str();
    cmd->add_option("--max", o.grid_max, "grid end")->capture_default_str();
    cmd->add_option("--steps", o.steps, "grid size")->capture_default_str();
}

void add_fock_options(CLI::App* cmd, Options& o) {
    cmd->add_option("--fock-dim", o.fock_dim, "initial Fock-space truncation")
        ->capture_default_str();
    cmd->add_option("--tail-tol", o.tail_tol,
                    "max allowed steady-state population in the top two Fock levels")
        ->capture_default_str();
    cmd->add_option("--fock-max-dim", o.fock_max_dim, "truncation escalation cap")
        ->capture_default_str();
}

ModelParams make_params(const Options& o) {
    ModelParams p;
    p.alpha = o.alpha;
    p.delta = o.delta * o.alpha;
    if (o.epsilon.has_value()) {
        p.epsilon = *o.epsilon * o.alpha;
    } else {
        p.epsilon = o.omega.value_or(0.06) * o.alpha * std::sqrt(static_cast<double>(o.two_s));
    }
    if (o.kappa.has_value()) {
        p.kappa = *o.kappa * o.alpha;
    } else {
        p.kappa = o.gamma.value_or(1e-3) * o.alpha * static_cast<double>(o.two_s);
    }
    p.sign = (o.sign == "attractive") ? NonlinearSign::Attractive : NonlinearSign::Repulsive;
    p.validate();
    return p;
}

SweepConfig make_sweep_config(const Options& o, Engine engine) {
    SweepConfig cfg;
    cfg.engine = engine;
    cfg.two_s = o.two_s;
    cfg.fock = FockConfig{o.fock_dim, o.tail_tol, o.fock_max_dim};
    if (engine == Engine::Numeric) {
        cfg.fock.validate();
    }
    return cfg;
}

std::vector<Engine> selected_engines(const Options& o) {
    if (o.engine == "analytic") {
        return {Engine::Analytic};
    }
    if (o.engine == "numeric") {
        return {Engine::Numeric};
    }
    return {Engine::Analytic, Engine::Numeric};
}

// Axis values are computed in absolute units and reported in units of alpha.
SweepResult to_alpha_units(SweepResult result, double alpha) {
    for (double& v : result.axis) {
        v /= alpha;
    }
    result.axis_name += "_over_alpha";
    return result;
}

std::set<std::string> collect_warnings(const ModelParams& params, const SweepResult& result,
                                       const Options& o, bool over_drive) {
    std::set<std::string> warnings;
    if (result.engine != Engine::Analytic) {
        return warnings;
    }
    for (size_t i = 0; i < result.axis.size(); ++i) {
        ModelParams point = params;
        if (over_drive) {
            point.epsilon = result.axis[i] * std::sqrt(static_cast<double>(o.two_s));
        } else {
            point.delta = result.axis[i];
        }
        for (std::string& w : regime_warnings(scale(point, o.two_s), result.rows[i].mean_n)) {
            warnings.insert(std::move(w));
        }
    }
    return warnings;
}

void write_warning_lines(std::ostream& out, const std::set<std::string>& warnings) {
    for (const std::string& w : warnings) {
        write_summary_line(out, "warning", w);
    }
}

void deliver(const std::string& text, const std::string& path) {
    if (path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream file(path);
    if (!file) {
        throw std::runtime_error("cannot open output file: " + path);
    }
    file << text;
    if (!file) {
        throw std::runtime_error("write failed: " + path);
    }
}

int run_point(const Options& o) {
    const ModelParams params = make_params(o);
    std::ostringstream buf;
    bool header = true;
    std::set<std::string> warnings;
    for (Engine engine : selected_engines(o)) {
        const SweepConfig cfg = make_sweep_config(o, engine);
        const SweepRow row = evaluate_point(params, cfg);

        SweepResult result;
        result.axis_name = "delta_over_alpha";
        result.axis = {o.delta};
        result.rows = {row};
        result.engine = engine;
        write_csv(result, buf, header);
        header = false;

        const std::string suffix = (o.engine == "both") ? "_" + std::string(to_string(engine))
                                                        : std::string();
        write_summary_line(buf, "mean_n" + suffix, row.mean_n);
        if (row.g2.has_value()) {
            write_summary_line(buf, "g2" + suffix, *row.g2);
        }
        if (row.phi_plus.has_value()) {
            write_summary_line(buf, "phi_plus" + suffix, *row.phi_plus);
            write_summary_line(buf, "phi_minus" + suffix, *row.phi_minus);
        }
        if (engine == Engine::Analytic) {
            const ScaledParams scaled = scale(params, o.two_s);
            for (std::string& w : regime_warnings(scaled, row.mean_n)) {
                warnings.insert(std::move(w));
            }
        }
    }
    write_warning_lines(buf, warnings);
    deliver(buf.str(), o.out_path);
    return 0;
}

int run_sweep(const Options& o, bool over_drive) {
    const ModelParams params = make_params(o);
    const GridSpec grid{o.grid_min * o.alpha, o.grid_max * o.alpha, o.steps};
    grid.validate();

    std::ostringstream buf;
    bool header = true;
    int rows = 0;
    std::set<std::string> warnings;
    for (Engine engine : selected_engines(o)) {
        const SweepConfig cfg = make_sweep_config(o, engine);
        const SweepResult result = over_drive ? sweep_drive(params, grid, cfg)
                                              : sweep_detuning(params, grid, cfg);
        for (auto& w : collect_warnings(params, result, o, over_drive)) {
            warnings.insert(w);
        }
        rows += write_csv(to_alpha_units(result, o.alpha), buf, header);
        header = false;
    }
    write_summary_line(buf, "rows", format_double(rows));
    write_warning_lines(buf, warnings);
    deliver(buf.str(), o.out_path);
    return 0;
}

int run_estimate(const Options& o) {
    const ModelParams params = make_params(o);
    const GridSpec grid{o.grid_min * o.alpha, o.grid_max * o.alpha, o.steps};
    const Engine engine = (o.engine == "numeric") ? Engine::Numeric : Engine::Analytic;
    const SweepConfig cfg = make_sweep_config(o, engine);
    const SweepResult result = sweep_detuning(params, grid, cfg);

    const std::vector<double> peaks = detect_peaks(result, o.prominence);
    const PeakEstimate estimate = estimate_alpha(peaks);

    std::ostringstream buf;
    write_csv(to_alpha_units(result, o.alpha), buf);
    write_summary_line(buf, "n_peaks", format_double(static_cast<double>(peaks.size())));
    std::string positions;
    std::string spacings;
    for (size_t i = 0; i < estimate.peak_positions.size(); ++i) {
        positions += (i ? ";" : "") + format_double(estimate.peak_positions[i] / o.alpha);
    }
    for (size_t i = 0; i < estimate.spacings.size(); ++i) {
        spacings += (i ? ";" : "") + format_double(estimate.spacings[i] / o.alpha);
    }
    write_summary_line(buf, "peak_positions_over_alpha", positions);
    write_summary_line(buf, "spacings_over_alpha", spacings);
    write_summary_line(buf, "alpha_hat", estimate.alpha_hat);
    write_summary_line(buf, "alpha_hat_over_alpha", estimate.alpha_hat / o.alpha);
    write_summary_line(buf, "spread", estimate.spread);
    write_warning_lines(buf, collect_warnings(params, result, o, false));
    deliver(buf.str(), o.out_path);
    return 0;
}

int run_compare(const Options& o) {
    const ModelParams params = make_params(o);
    const GridSpec grid{o.grid_min * o.alpha, o.grid_max * o.alpha, o.steps};

    const SweepResult analytic =
        sweep_detuning(params, grid, make_sweep_config(o, Engine::Analytic));
    const SweepResult numeric =
        sweep_detuning(params, grid, make_sweep_config(o, Engine::Numeric));

    std::ostringstream buf;
    double max_diff = 0.0;
    const int rows = write_compare_csv(to_alpha_units(analytic, o.alpha),
                                       to_alpha_units(numeric, o.alpha), buf, &max_diff);
    write_summary_line(buf, "rows", format_double(rows));
    write_summary_line(buf, "max_abs_diff_mean_n", max_diff);
    write_warning_lines(buf, collect_warnings(params, analytic, o, false));
    deliver(buf.str(), o.out_path);
    return 0;
}

void apply_thread_env() {
#ifdef _OPENMP
    const char* raw = std::getenv("KERRSCOPE_THREADS");
    if (raw == nullptr || *raw == '\0') {
        return;
    }
    char* end = nullptr;
    const long n = std::strtol(raw, &end, 10);
    if (end == raw || *end != '\0' || n <= 0) {
        std::cerr << "kerrscope: ignoring invalid KERRSCOPE_THREADS value '" << raw << "'\n";
        return;
    }
    omp_set_num_threads(static_cast<int>(n));
#endif
}

} // namespace

int main(int argc, char** argv) {
    apply_thread_env();

    CLI::App app{"Steady state of a coherently driven, damped Kerr oscillator: "
                 "closed-form photon statistics, a truncated-Fock master-equation "
                 "solver, and nonlinearity estimation from resonance spacings"};
    app.require_subcommand(1);

    Options point_o;
    auto* point = app.add_subcommand("point", "observables at a single detuning");
    add_model_options(point, point_o);
    add_engine_option(point, point_o, true);
    add_fock_options(point, point_o);

    Options sweep_det_o;
    auto* sweep_det = app.add_subcommand("sweep-detuning", "observables over a detuning grid");
    add_model_options(sweep_det, sweep_det_o);
    add_engine_option(sweep_det, sweep_det_o, true);
    add_grid_options(sweep_det, sweep_det_o, -7.0, 1.0, 1601);
    add_fock_options(sweep_det, sweep_det_o);

    Options sweep_drv_o;
    auto* sweep_drv = app.add_subcommand("sweep-drive", "observables over a drive grid");
    add_model_options(sweep_drv, sweep_drv_o);
    add_engine_option(sweep_drv, sweep_drv_o, true);
    add_grid_options(sweep_drv, sweep_drv_o, 0.0, 0.05, 201);
    add_fock_options(sweep_drv, sweep_drv_o);

    Options estimate_o;
    auto* estimate = app.add_subcommand(
        "estimate-alpha", "recover the nonlinearity from detuning-sweep peak spacings");
    add_model_options(estimate, estimate_o);
    add_engine_option(estimate, estimate_o, false);
    add_grid_options(estimate, estimate_o, -7.0, 1.0, 1601);
    add_fock_options(estimate, estimate_o);
    estimate->add_option("--prominence", estimate_o.prominence,
                         "minimum peak prominence, in photons")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();

    Options compare_o;
    auto* compare = app.add_subcommand(
        "compare", "closed-form vs master-equation engines on one detuning grid");
    add_model_options(compare, compare_o);
    add_grid_options(compare, compare_o, -7.0, 1.0, 1601);
    add_fock_options(compare, compare_o);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "kerrscope: argument error: " << e.what() << "\n";
        return 1;
    }

    try {
        if (point->parsed()) {
            return run_point(point_o);
        }
        if (sweep_det->parsed()) {
            return run_sweep(sweep_det_o, false);
        }
        if (sweep_drv->parsed()) {
            return run_sweep(sweep_drv_o, true);
        }
        if (estimate->parsed()) {
            return run_estimate(estimate_o);
        }
        return run_compare(compare_o);
    } catch (const InsufficientPeaksError& e) {
        std::cerr << "kerrscope: estimator error: " << e.what() << "\n";
        return 3;
    } catch (const SolverError& e) {
        std::cerr << "kerrscope: solver error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "kerrscope: argument error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "kerrscope: error: " << e.what() << "\n";
        return 1;
    }
}
