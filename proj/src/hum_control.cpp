#include "sidewise/hum_control.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <span>

#include "sidewise/errors.hpp"
#include "sidewise/wave_solver.hpp"

namespace sidewise {

namespace {

double trapezoid_weight(std::size_t n, std::size_t last) { return (n == 0 || n == last) ? 0.5 : 1.0; }

std::vector<double> to_vector(const TimeSignal& s) { return {s.values().begin(), s.values().end()}; }

TimeSignal on_grid(const Grid1D& grid, std::vector<double> v, double active_from = TimeSignal::always_active) {
    return TimeSignal(0.0, grid.dt(), std::move(v)).masked(active_from);
}

std::vector<double> zero_nodes(const Grid1D& grid) { return std::vector<double>(grid.nodes(), 0.0); }

// psi_x(0, .) for right Dirichlet data s without the admissibility check; the
// penalized variant also feeds data that is nonzero before L*beta.
TimeSignal observe_left_flux(const CoefficientField& field, const Grid1D& grid, const TimeSignal& s) {
    const auto zero = zero_nodes(grid);
    const auto reversed =
        solve_forward(field, grid, zero, zero, TimeSignal::zeros(grid), s.reversed());
    return extract_flux(reversed.time_reversed(), field, Side::left, FluxStencil::energy_consistent);
}

TimeSignal right_flux(const SidewiseProblem& p, std::span<const double> y0, std::span<const double> y1,
                      const TimeSignal& u) {
    const auto y = solve_forward(p.field, p.grid, y0, y1, u, TimeSignal::zeros(p.grid));
    return extract_flux(y, p.field, Side::right, FluxStencil::energy_consistent);
}

double window_start_time(const Grid1D& grid, std::size_t level) { return grid.t(level); }

// Tridiagonal (W + S) with S the stiffness of -d^2/dt^2 on the unknown levels
// (cut, M]: Dirichlet at the cutoff level, natural at the last level.
std::vector<double> solve_h1(std::span<const double> weights, double dt, std::span<const double> rhs) {
    const std::size_t k = rhs.size();
    std::vector<double> diag(k), upper(k, 0.0), out(rhs.begin(), rhs.end());
    for (std::size_t j = 0; j < k; ++j) {
        diag[j] = weights[j] + (j + 1 == k ? 1.0 : 2.0) / dt;
        if (j + 1 < k) upper[j] = -1.0 / dt;
    }
    for (std::size_t j = 1; j < k; ++j) {
        const double m = upper[j - 1] / diag[j - 1];
        diag[j] -= m * upper[j - 1];
        out[j] -= m * out[j - 1];
    }
    out[k - 1] /= diag[k - 1];
    for (std::size_t j = k - 1; j-- > 0;) out[j] = (out[j] - upper[j] * out[j + 1]) / diag[j];
    return out;
}

}  // namespace

SidewiseProblem SidewiseProblem::with_zero_data(CoefficientField field, const Grid1D& grid,
                                                const TimeSignal& target) {
    auto p = target.size() == grid.levels() ? target : target.resampled(grid);
    // Below the minimal time only the penalized variant applies; it tracks on (0, T).
    if (grid.horizon > minimal_control_time(field)) p = p.masked(grid.t(cutoff_level(field, grid)));
    return {std::move(field), grid, std::move(p), zero_nodes(grid), zero_nodes(grid)};
}

bool SidewiseProblem::has_initial_data() const noexcept {
    const auto nonzero = [](double v) { return v != 0.0; };
    return std::any_of(y0.begin(), y0.end(), nonzero) || std::any_of(y1.begin(), y1.end(), nonzero);
}

void SidewiseProblem::validate_for_exact_control() const {
    grid.validate();
    const double min_time = minimal_control_time(field);
    if (!(grid.horizon > min_time) || cutoff_level(field, grid) >= grid.steps)
        throw MinimalTimeError(grid.horizon, min_time);
    if (target.size() != grid.levels())
        throw ContractError("target must be sampled on the grid's time levels");
    if (y0.size() != grid.nodes() || y1.size() != grid.nodes())
        throw ContractError("initial data must have one sample per space node");
}

double window_pairing(const TimeSignal& f, const TimeSignal& g, std::size_t from_level) {
    if (f.size() != g.size()) throw ContractError("pairing: signals have different lengths");
    const std::size_t last = f.size() - 1;
    double sum = 0.0;
    for (std::size_t n = from_level + 1; n <= last; ++n) sum += trapezoid_weight(n, last) * f[n] * g[n];
    return sum * f.dt();
}

double window_norm(const TimeSignal& f, std::size_t from_level) {
    return std::sqrt(window_pairing(f, f, from_level));
}

double l2_norm(const TimeSignal& f) {
    const std::size_t last = f.size() - 1;
    double sum = 0.0;
    for (std::size_t n = 0; n <= last; ++n) sum += trapezoid_weight(n, last) * f[n] * f[n];
    return std::sqrt(sum * f.dt());
}

TimeSignal adjoint_observation(const SidewiseProblem& problem, const TimeSignal& s0) {
    const auto psi = solve_adjoint(problem.field, problem.grid, s0);
    return extract_flux(psi, problem.field, Side::left, FluxStencil::energy_consistent);
}

TimeSignal control_from_adjoint(const SidewiseProblem& problem, const TimeSignal& s0) {
    auto v = to_vector(adjoint_observation(problem, s0));
    const double a_left = problem.field.a_at(0.0);
    for (auto& x : v) x *= -a_left;
    return on_grid(problem.grid, std::move(v));
}

TimeSignal flux_response(const SidewiseProblem& problem, const TimeSignal& u) {
    const auto zero = zero_nodes(problem.grid);
    return right_flux(problem, zero, zero, u);
}

double functional_J(const SidewiseProblem& problem, const TimeSignal& s0) {
    const auto obs = adjoint_observation(problem, s0);
    const double a_left = problem.field.a_at(0.0);
    const double a_right = problem.field.a_at(problem.field.length());
    const double observed = a_left * l2_norm(obs);
    const auto cut = cutoff_level(problem.field, problem.grid);
    return 0.5 * observed * observed - a_right * window_pairing(s0, problem.target, cut);
}

TimeSignal gramian_apply(const SidewiseProblem& problem, const TimeSignal& s0) {
    const auto cut = cutoff_level(problem.field, problem.grid);
    const auto flux = flux_response(problem, control_from_adjoint(problem, s0));
    return flux.masked(problem.grid.t(cut));
}

TimeSignal gradient_J(const SidewiseProblem& problem, const TimeSignal& s0) {
    const auto cut = cutoff_level(problem.field, problem.grid);
    const auto lambda = gramian_apply(problem, s0);
    const double a_right = problem.field.a_at(problem.field.length());
    std::vector<double> g(lambda.size());
    for (std::size_t n = 0; n < g.size(); ++n) g[n] = a_right * (lambda[n] - problem.target[n]);
    return on_grid(problem.grid, std::move(g), problem.grid.t(cut));
}

SidewiseProblem reduce_initial_data(const SidewiseProblem& problem) {
    if (!problem.has_initial_data()) return problem;
    const auto free_flux = right_flux(problem, problem.y0, problem.y1, TimeSignal::zeros(problem.grid));
    const auto cut = cutoff_level(problem.field, problem.grid);
    std::vector<double> p(problem.target.size());
    for (std::size_t n = 0; n < p.size(); ++n) p[n] = problem.target[n] - free_flux[n];
    SidewiseProblem reduced = problem;
    reduced.target = on_grid(problem.grid, std::move(p), problem.grid.t(cut));
    std::fill(reduced.y0.begin(), reduced.y0.end(), 0.0);
    std::fill(reduced.y1.begin(), reduced.y1.end(), 0.0);
    return reduced;
}

ControlResult minimize_J(const SidewiseProblem& problem, const HumOptions& options) {
    problem.validate_for_exact_control();
    const SidewiseProblem reduced = reduce_initial_data(problem);
    const Grid1D& grid = problem.grid;
    const std::size_t last = grid.steps;
    const std::size_t cut = cutoff_level(problem.field, grid);
    const double cutoff_time = grid.t(cut);
    const double a_right = problem.field.a_at(problem.field.length());

    // Unknowns are the levels cut+1 .. M. Euclidean form: A s = (W Lambda) s = W p.
    const std::size_t k = last - cut;
    std::vector<double> weight(k);
    for (std::size_t j = 0; j < k; ++j) weight[j] = trapezoid_weight(cut + 1 + j, last) * grid.dt();

    const auto embed = [&](std::span<const double> x) {
        std::vector<double> full(grid.levels(), 0.0);
        std::copy(x.begin(), x.end(), full.begin() + static_cast<std::ptrdiff_t>(cut + 1));
        return on_grid(grid, std::move(full), cutoff_time);
    };
    const auto apply = [&](std::span<const double> x) {
        const auto lambda = gramian_apply(reduced, embed(x));
        std::vector<double> q(k);
        for (std::size_t j = 0; j < k; ++j) q[j] = weight[j] * lambda[cut + 1 + j];
        return q;
    };
    const auto precondition = [&](std::span<const double> r) {
        if (options.preconditioner == Preconditioner::h1) return solve_h1(weight, grid.dt(), r);
        std::vector<double> z(r.size());
        for (std::size_t j = 0; j < r.size(); ++j) z[j] = r[j] / weight[j];
        return z;
    };
    const auto dot = [](std::span<const double> a, std::span<const double> b) {
        return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
    };
    // Discrete L^2 norm of the physical residual p - Lambda s, given r = W (p - Lambda s).
    const auto residual_norm = [&](std::span<const double> r) {
        double sum = 0.0;
        for (std::size_t j = 0; j < k; ++j) sum += r[j] * r[j] / weight[j];
        return std::sqrt(sum);
    };

    ControlResult result;
    result.target = problem.target;
    result.tracking_level = cut;

    std::vector<double> b(k);
    for (std::size_t j = 0; j < k; ++j) b[j] = weight[j] * reduced.target[cut + 1 + j];
    const double b_norm = residual_norm(b);

    std::vector<double> x(k, 0.0);
    if (b_norm > 0.0) {
        // Preconditioned conjugate residuals: the CG recurrence in the A-weighted
        // inner product, so the residual norm decreases monotonically.
        std::vector<double> r = b;
        std::vector<double> z = precondition(r);
        std::vector<double> az = apply(z);
        std::vector<double> d = z;
        std::vector<double> ad = az;
        double gamma = dot(z, az);
        result.converged = false;
        result.residual_history.push_back(1.0);
        for (std::size_t it = 0; it < options.max_iter; ++it) {
            const auto pad = precondition(ad);
            const double curvature = dot(ad, pad);
            if (!(gamma > 0.0) || !(curvature > 0.0)) {
                result.message = "conjugate residuals broke down on a null direction of the Gramian";
                break;
            }
            const double alpha = gamma / curvature;
            for (std::size_t j = 0; j < k; ++j) {
                x[j] += alpha * d[j];
                r[j] -= alpha * ad[j];
                z[j] -= alpha * pad[j];
            }
            result.iterations = it + 1;
            // J = a(L) (x.A x / 2 - x.b) with A x = b - r
            result.j_history.push_back(-0.5 * a_right * (dot(x, b) + dot(x, r)));
            const double rel = residual_norm(r) / b_norm;
            result.residual_history.push_back(rel);
            if (rel <= options.tol) {
                result.converged = true;
                break;
            }
            az = apply(z);
            const double gamma_next = dot(z, az);
            const double beta_cg = gamma_next / gamma;
            gamma = gamma_next;
            for (std::size_t j = 0; j < k; ++j) {
                d[j] = z[j] + beta_cg * d[j];
                ad[j] = az[j] + beta_cg * ad[j];
            }
        }
        if (!result.converged && result.message.empty())
            result.message = "residual tolerance not reached within max_iter";
    }

    result.minimizer_s0 = embed(x);
    result.control = control_from_adjoint(reduced, result.minimizer_s0);
    result.achieved_flux = right_flux(problem, problem.y0, problem.y1, result.control);
    std::vector<double> mismatch(grid.levels());
    for (std::size_t n = 0; n < mismatch.size(); ++n)
        mismatch[n] = result.achieved_flux[n] - problem.target[n];
    const double target_norm = window_norm(problem.target, cut);
    const double mismatch_norm = window_norm(on_grid(grid, std::move(mismatch)), cut);
    result.tracking_error_l2 = target_norm > 0.0 ? mismatch_norm / target_norm : mismatch_norm;
    return result;
}

ControlResult penalized_optimal_control(const SidewiseProblem& problem, double kappa,
                                        const HumOptions& options) {
    if (!(kappa >= 0.0)) throw ContractError("penalty parameter kappa must be nonnegative");
    const Grid1D& grid = problem.grid;
    grid.validate();
    if (problem.target.size() != grid.levels())
        throw ContractError("target must be sampled on the grid's time levels");
    const SidewiseProblem reduced = reduce_initial_data(problem);
    const std::size_t last = grid.steps;
    const bool reachable = grid.horizon > minimal_control_time(problem.field);
    const std::size_t window = reachable ? cutoff_level(problem.field, grid) : 0;
    const double window_time = window_start_time(grid, window);
    const double a_right = problem.field.a_at(problem.field.length());

    std::vector<double> weight(grid.levels());
    for (std::size_t n = 0; n <= last; ++n) weight[n] = trapezoid_weight(n, last) * grid.dt();
    const auto dot = [](std::span<const double> a, std::span<const double> b) {
        return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
    };
    // G u: tracked flux on the window; G* m = -a(0) psi_x(0,.)[m] / a(L).
    const auto forward_map = [&](const std::vector<double>& u) {
        return flux_response(reduced, on_grid(grid, u)).masked(window_time);
    };
    const auto adjoint_map = [&](const TimeSignal& m) {
        const auto obs = observe_left_flux(reduced.field, grid, m.masked(window_time));
        const double scale = -problem.field.a_at(0.0) / a_right;
        std::vector<double> v(obs.size());
        for (std::size_t n = 0; n < v.size(); ++n) v[n] = scale * obs[n];
        return v;
    };
    const auto normal_apply = [&](const std::vector<double>& u) {
        auto v = adjoint_map(forward_map(u));
        for (std::size_t n = 0; n < v.size(); ++n) v[n] = u[n] + kappa * v[n];
        return v;
    };

    const auto target = reduced.target.masked(window_time);
    auto rhs = adjoint_map(target);
    for (auto& v : rhs) v *= kappa;

    ControlResult result;
    result.target = problem.target;
    result.tracking_level = window;
    std::vector<double> u(grid.levels(), 0.0);

    // CG in the trapezoidal L^2(0,T) geometry: Euclidean residual r = W (rhs - A u).
    std::vector<double> r_phys = rhs;
    std::vector<double> r(grid.levels());
    for (std::size_t n = 0; n <= last; ++n) r[n] = weight[n] * r_phys[n];
    const double rhs_norm = std::sqrt(dot(r, r_phys));
    const double target_sq = window_pairing(target, target, window);
    const auto objective = [&](const std::vector<double>& uu) {
        const auto flux = forward_map(uu);
        std::vector<double> mm(flux.size());
        for (std::size_t n = 0; n < mm.size(); ++n) mm[n] = flux[n] - target[n];
        const auto mis = on_grid(grid, std::move(mm));
        std::vector<double> wu(uu.size());
        for (std::size_t n = 0; n <= last; ++n) wu[n] = weight[n] * uu[n];
        return 0.5 * (dot(wu, uu) + kappa * window_pairing(mis, mis, window));
    };

    if (rhs_norm > 0.0) {
        result.converged = false;
        std::vector<double> d = r_phys;  // z = W^{-1} r
        double rz = dot(r, r_phys);
        result.residual_history.push_back(1.0);
        for (std::size_t it = 0; it < options.max_iter; ++it) {
            const auto q_phys = normal_apply(d);
            double curvature = 0.0;
            for (std::size_t n = 0; n <= last; ++n) curvature += d[n] * weight[n] * q_phys[n];
            if (!(curvature > 0.0)) {
                result.message = "conjugate gradients met a non-positive curvature direction";
                break;
            }
            const double alpha = rz / curvature;
            double rz_next = 0.0;
            for (std::size_t n = 0; n <= last; ++n) {
                u[n] += alpha * d[n];
                r_phys[n] -= alpha * q_phys[n];
                r[n] = weight[n] * r_phys[n];
                rz_next += r[n] * r_phys[n];
            }
            result.iterations = it + 1;
            // Phi(u) = 1/2 u.Au - u.b + |p|^2 kappa/2 with A u = b - r
            double ub = 0.0, ur = 0.0;
            for (std::size_t n = 0; n <= last; ++n) {
                ub += u[n] * weight[n] * rhs[n];
                ur += u[n] * r[n];
            }
            result.j_history.push_back(0.5 * (ub - ur) - ub + 0.5 * kappa * target_sq);
            const double rel = std::sqrt(rz_next) / rhs_norm;
            result.residual_history.push_back(rel);
            if (rel <= options.tol) {
                result.converged = true;
                break;
            }
            const double beta_cg = rz_next / rz;
            rz = rz_next;
            for (std::size_t n = 0; n <= last; ++n) d[n] = r_phys[n] + beta_cg * d[n];
        }
        if (!result.converged && result.message.empty())
            result.message = "conjugate gradients did not reach the tolerance within max_iter";
    } else {
        result.j_history.push_back(objective(u));
    }

    result.control = on_grid(grid, u);
    result.achieved_flux = right_flux(problem, problem.y0, problem.y1, result.control);
    std::vector<double> mismatch(grid.levels());
    for (std::size_t n = 0; n < mismatch.size(); ++n)
        mismatch[n] = result.achieved_flux[n] - problem.target[n];
    const double target_norm = window_norm(problem.target.masked(window_time), window);
    const double mismatch_norm = window_norm(on_grid(grid, std::move(mismatch)), window);
    result.tracking_error_l2 = target_norm > 0.0 ? mismatch_norm / target_norm : mismatch_norm;
    return result;
}

}  // namespace sidewise
