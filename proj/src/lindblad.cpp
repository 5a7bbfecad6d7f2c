#include "kerrscope/lindblad.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <string>

namespace kerrscope {

namespace {

using Complex = std::complex<double>;

// Index of matrix element (row, col) in the column-stacked vector.
inline Eigen::Index stacked(int dim, int row, int col) {
    return static_cast<Eigen::Index>(col) * dim + row;
}

std::string compact(double value) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", value);
    return buf;
}

} // namespace

void FockConfig::validate() const {
    if (dim < 2) {
        throw std::invalid_argument("fock dim must be >= 2, got " + std::to_string(dim));
    }
    if (!(tail_tol > 0.0) || !(tail_tol < 1.0)) {
        throw std::invalid_argument("tail tolerance must lie in (0, 1)");
    }
    if (max_dim < dim) {
        throw std::invalid_argument("fock max_dim must be >= dim");
    }
}

ComplexMatrix build_annihilation(int dim) {
    ComplexMatrix a = ComplexMatrix::Zero(dim, dim);
    for (int n = 1; n < dim; ++n) {
        a(n - 1, n) = std::sqrt(static_cast<double>(n));
    }
    return a;
}

ComplexMatrix build_hamiltonian(const ModelParams& params, int dim) {
    params.validate();
    if (dim < 2) {
        throw std::invalid_argument("fock dim must be >= 2");
    }
    const double kerr = (params.sign == NonlinearSign::Attractive) ? -params.alpha
                                                                   : params.alpha;
    ComplexMatrix h = ComplexMatrix::Zero(dim, dim);
    for (int n = 0; n < dim; ++n) {
        h(n, n) = -params.delta * n + kerr * n * (n - 1.0);
    }
    for (int n = 0; n + 1 < dim; ++n) {
        const double drive = params.epsilon * std::sqrt(n + 1.0);
        h(n, n + 1) = drive;
        h(n + 1, n) = drive;
    }
    return h;
}

ComplexMatrix build_liouvillian(const ModelParams& params, int dim) {
    const ComplexMatrix h = build_hamiltonian(params, dim);
    const Complex minus_i(0.0, -1.0);
    const Complex plus_i(0.0, 1.0);

    // Assembled element by element instead of via Kronecker products so no
    // dim^2 x dim^2 temporaries are materialized alongside the result.
    ComplexMatrix lv = ComplexMatrix::Zero(static_cast<Eigen::Index>(dim) * dim,
                                           static_cast<Eigen::Index>(dim) * dim);
    for (int c = 0; c < dim; ++c) {
        for (int r = 0; r < dim; ++r) {
            const Eigen::Index target = stacked(dim, r, c);
            // -i (H rho): couples to rho(k, c); +i (rho H): couples to rho(r, k)
            for (int k = 0; k < dim; ++k) {
                lv(target, stacked(dim, k, c)) += minus_i * h(r, k);
                lv(target, stacked(dim, r, k)) += plus_i * h(k, c);
            }
            // 2 kappa a rho a^+ feeds (r, c) from (r+1, c+1)
            if (r + 1 < dim && c + 1 < dim) {
                lv(target, stacked(dim, r + 1, c + 1)) +=
                    2.0 * params.kappa * std::sqrt((r + 1.0) * (c + 1.0));
            }
            // -kappa (a^+a rho + rho a^+a)
            lv(target, target) -= params.kappa * (r + c);
        }
    }
    return lv;
}

ComplexVector vectorize(const ComplexMatrix& m) {
    return Eigen::Map<const ComplexVector>(m.data(), m.size());
}

ComplexMatrix unvectorize(const ComplexVector& v) {
    const auto dim = static_cast<Eigen::Index>(std::lround(std::sqrt(double(v.size()))));
    if (dim * dim != v.size()) {
        throw std::invalid_argument("vector length is not a perfect square");
    }
    return Eigen::Map<const ComplexMatrix>(v.data(), dim, dim);
}

namespace {

// One dense solve at fixed truncation; reports the top-two-level population.
DensityMatrix solve_at_dim(const ModelParams& params, int dim, double* tail_out) {
    ComplexMatrix a = build_liouvillian(params, dim);

    // Replace the rho_00 equation by the trace constraint sum_j rho_jj = 1.
    a.row(0).setZero();
    for (int j = 0; j < dim; ++j) {
        a(0, stacked(dim, j, j)) = 1.0;
    }
    ComplexVector b = ComplexVector::Zero(a.rows());
    b(0) = 1.0;

    // In-place factorization: `a` is consumed, which keeps the peak memory
    // at one superoperator even for escalated truncations.
    Eigen::PartialPivLU<Eigen::Ref<ComplexMatrix>> lu(a);
    const auto u_diag = lu.matrixLU().diagonal().cwiseAbs();
    const double u_max = u_diag.maxCoeff();
    const double u_min = u_diag.minCoeff();
    if (!(u_max > 0.0) || u_min <= 1e-14 * u_max) {
        throw SingularSystemError("steady-state system is singular at dim=" +
                                  std::to_string(dim));
    }
    ComplexVector x = lu.solve(b);
    if (!x.allFinite()) {
        throw SingularSystemError("steady-state solve produced non-finite values at dim=" +
                                  std::to_string(dim));
    }

    DensityMatrix result{unvectorize(x)};
    result.rho = 0.5 * (result.rho + result.rho.adjoint()).eval();
    if (tail_out != nullptr) {
        *tail_out = std::abs(result.rho(dim - 1, dim - 1).real()) +
                    std::abs(result.rho(dim - 2, dim - 2).real());
    }
    return result;
}

} // namespace

DensityMatrix steady_state(const ModelParams& params, const FockConfig& cfg) {
    params.validate();
    cfg.validate();

    int dim = cfg.dim;
    for (;;) {
        double tail = 0.0;
        DensityMatrix rho = solve_at_dim(params, dim, &tail);
        if (tail <= cfg.tail_tol) {
            return rho;
        }
        const int next = std::min(2 * dim, cfg.max_dim);
        if (next == dim) {
            throw NoConvergenceError(
                "top-level population " + compact(tail) + " exceeds tail tolerance " +
                compact(cfg.tail_tol) + " at the truncation cap dim=" + std::to_string(dim));
        }
        dim = next;
    }
}

DensityMatrix evolve(const DensityMatrix& rho0, const ModelParams& params,
                     double dt, double t_final) {
    params.validate();
    if (!(dt > 0.0) || !std::isfinite(dt)) {
        throw std::invalid_argument("dt must be positive and finite");
    }
    if (!(t_final >= 0.0) || !std::isfinite(t_final)) {
        throw std::invalid_argument("t_final must be >= 0 and finite");
    }

    const int dim = rho0.dim();
    const ComplexMatrix h = build_hamiltonian(params, dim);
    const ComplexMatrix a = build_annihilation(dim);
    const ComplexMatrix ad = a.adjoint();
    const double kappa = params.kappa;
    const Complex minus_i(0.0, -1.0);

    Eigen::VectorXd number = Eigen::VectorXd::LinSpaced(dim, 0.0, dim - 1.0);
    auto rhs = [&](const ComplexMatrix& rho) -> ComplexMatrix {
        ComplexMatrix out = minus_i * (h * rho - rho * h);
        out.noalias() += 2.0 * kappa * (a * rho * ad);
        out -= kappa * (number.asDiagonal() * rho + rho * number.asDiagonal());
        return out;
    };

    ComplexMatrix rho = rho0.rho;
    const double trace0 = rho.trace().real();

    auto rk4_step = [&](double step) {
        const ComplexMatrix k1 = rhs(rho);
        const ComplexMatrix k2 = rhs(rho + (0.5 * step) * k1);
        const ComplexMatrix k3 = rhs(rho + (0.5 * step) * k2);
        const ComplexMatrix k4 = rhs(rho + step * k3);
        rho += (step / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    };

    const auto full_steps = static_cast<long long>(std::floor(t_final / dt + 1e-12));
    const double remainder = t_final - static_cast<double>(full_steps) * dt;
    for (long long step = 0; step < full_steps; ++step) {
        rk4_step(dt);
        const double trace = rho.trace().real();
        if (!std::isfinite(trace) || std::abs(trace - trace0) > 1e-6) {
            throw InstabilityError(
                "trace drifted by " + compact(trace - trace0) + " after " +
                std::to_string(step + 1) + " steps; reduce dt (stability needs roughly "
                "dt * ||L|| < 1)");
        }
    }
    if (remainder > 1e-12 * dt) {
        rk4_step(remainder);
    }
    return DensityMatrix{rho};
}

NumericObservables observables_full(const DensityMatrix& rho) {
    const int dim = rho.dim();
    NumericObservables out;
    out.distribution.probs.resize(static_cast<size_t>(dim));
    for (int n = 0; n < dim; ++n) {
        const double p = rho.rho(n, n).real();
        out.distribution.probs[static_cast<size_t>(n)] = p;
        out.scalars.mean_n += n * p;
        out.scalars.g2_unnorm += static_cast<double>(n) * (n - 1.0) * p;
    }
    if (out.scalars.mean_n > 0.0) {
        out.scalars.g2 = out.scalars.g2_unnorm / (out.scalars.mean_n * out.scalars.mean_n);
    }
    const double corner = 0.5 * (rho.rho(0, 0).real() + rho.rho(1, 1).real());
    const double coherence = rho.rho(0, 1).real();
    out.fidelity.phi_plus = corner + coherence;
    out.fidelity.phi_minus = corner - coherence;
    return out;
}

} // namespace kerrscope
