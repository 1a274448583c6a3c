#include "sidewise/observability.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "sidewise/errors.hpp"
#include "sidewise/wave_solver.hpp"

namespace sidewise {

namespace {

double trapezoid(std::size_t n, std::size_t lo, std::size_t hi) { return (n == lo || n == hi) ? 0.5 : 1.0; }

double time_derivative(const SpaceTimeField& y, std::size_t i, std::size_t n) {
    const double dt = y.grid().dt();
    const std::size_t last = y.levels() - 1;
    if (n == 0) return (-3.0 * y(i, 0) + 4.0 * y(i, 1) - y(i, 2)) / (2.0 * dt);
    if (n == last) return (3.0 * y(i, last) - 4.0 * y(i, last - 1) + y(i, last - 2)) / (2.0 * dt);
    return (y(i, n + 1) - y(i, n - 1)) / (2.0 * dt);
}

double space_derivative(const SpaceTimeField& y, std::size_t i, std::size_t n) {
    const double dx = y.grid().dx();
    const std::size_t last = y.nodes() - 1;
    if (i == 0) return (-3.0 * y(0, n) + 4.0 * y(1, n) - y(2, n)) / (2.0 * dx);
    if (i == last) return (3.0 * y(last, n) - 4.0 * y(last - 1, n) + y(last - 2, n)) / (2.0 * dx);
    return (y(i + 1, n) - y(i - 1, n)) / (2.0 * dx);
}

double slack(double bound, double lhs) {
    if (bound == 0.0) return lhs == 0.0 ? 0.0 : -std::numeric_limits<double>::infinity();
    return (bound - lhs) / bound;
}

double signal_derivative(const TimeSignal& s, std::size_t n, std::size_t lo) {
    const double dt = s.dt();
    const std::size_t last = s.size() - 1;
    if (n == lo) return (-3.0 * s[n] + 4.0 * s[n + 1] - s[n + 2]) / (2.0 * dt);
    if (n == last) return (3.0 * s[n] - 4.0 * s[n - 1] + s[n - 2]) / (2.0 * dt);
    return (s[n + 1] - s[n - 1]) / (2.0 * dt);
}

}  // namespace

SpaceTimeField extend_parity(const SpaceTimeField& psi, double tol) {
    const Grid1D& g = psi.grid();
    const std::size_t m = g.steps;
    const double scale = psi.max_abs();
    double final_size = 0.0;
    for (std::size_t i = 1; i + 1 < psi.nodes(); ++i)
        final_size = std::max({final_size, std::abs(psi(i, m)), std::abs(psi(i, m) - psi(i, m - 1))});
    if (final_size > tol * scale)
        throw ContractError("parity extension needs zero final data psi(., T) = psi_t(., T) = 0");

    Grid1D ext = g;
    ext.horizon = 2.0 * g.horizon;
    ext.steps = 2 * m;
    SpaceTimeField out(ext);
    for (std::size_t n = 0; n <= 2 * m; ++n) {
        const std::size_t src = n <= m ? n : 2 * m - n;
        for (std::size_t i = 0; i < psi.nodes(); ++i) out(i, n) = psi(i, src);
    }
    return out;
}

double sidewise_energy(const SpaceTimeField& extended, const CoefficientField& field, std::size_t i) {
    const Grid1D& g = extended.grid();
    if (i >= extended.nodes()) throw ContractError("sidewise energy: node index out of range");
    const double b = beta(field);
    const double x = g.x(i);
    const double dt = g.dt();
    const auto lo = static_cast<std::size_t>(std::ceil(b * x / dt - 1e-9));
    const double upper = (g.horizon - b * x) / dt;
    if (upper < 0.0) throw ContractError("sidewise energy: empty cone interval");
    const auto hi = static_cast<std::size_t>(std::floor(upper + 1e-9));
    if (lo >= hi || hi > g.steps) throw ContractError("sidewise energy: empty cone interval");

    const auto local = field.resampled(g.cells);
    const double rho = local.rho()[i];
    const double a = local.a()[i];
    double sum = 0.0;
    for (std::size_t n = lo; n <= hi; ++n) {
        const double yt = time_derivative(extended, i, n);
        const double yx = space_derivative(extended, i, n);
        sum += trapezoid(n, lo, hi) * (rho * yt * yt + a * yx * yx);
    }
    return 0.5 * sum * dt;
}

double observed_energy(const SpaceTimeField& extended) {
    const std::size_t m = extended.grid().steps / 2;
    double sum = 0.0;
    for (std::size_t n = 0; n <= m; ++n) {
        const double yx = space_derivative(extended, 0, n);
        sum += trapezoid(n, 0, m) * yx * yx;
    }
    return sum * extended.grid().dt();
}

EnergyBoundCheck check_energy_bound(const SpaceTimeField& extended, const CoefficientField& field) {
    const Grid1D& g = extended.grid();
    const auto bnd = bounds(field);
    const double growth = variation_growth_factor(field);
    const double a_left = field.a_at(0.0);
    const double length = field.length();

    EnergyBoundCheck out;
    out.observed = observed_energy(extended);
    const double energy_bound = a_left * growth * out.observed;

    double f_max = 0.0;
    for (std::size_t i = 0; i < extended.nodes(); ++i) {
        out.f_profile.push_back(sidewise_energy(extended, field, i));
        f_max = std::max(f_max, out.f_profile.back());
    }
    out.energy_margin = slack(energy_bound, f_max);

    // Traces at x = L over (L beta, T).
    const std::size_t m = g.steps / 2;
    const std::size_t last = extended.nodes() - 1;
    const auto lo = static_cast<std::size_t>(std::ceil(minimal_control_time(field) / g.dt() - 1e-9));
    double trace = 0.0, velocity = 0.0;
    for (std::size_t n = std::min(lo, m); n <= m; ++n) {
        const double w = trapezoid(n, std::min(lo, m), m);
        const double v = extended(last, n);
        const double vt = time_derivative(extended, last, n);
        trace += w * v * v;
        velocity += w * vt * vt;
    }
    trace *= g.dt();
    velocity *= g.dt() * field.rho_at(length);
    out.trace_margin = slack(a_left * length * length / std::min(bnd.rho0, bnd.a0) * growth * out.observed, trace);
    out.velocity_margin = slack(energy_bound, velocity);
    return out;
}

double h1_star_norm(const TimeSignal& s0, std::size_t from_level) {
    const std::size_t last = s0.size() - 1;
    for (std::size_t n = 0; n < from_level && n <= last; ++n)
        if (s0[n] != 0.0) throw ContractError("H^1_* norm: data must vanish before the cutoff");
    if (from_level + 2 > last) throw ContractError("H^1_* norm: fewer than three active levels");
    double sum = 0.0;
    for (std::size_t n = from_level; n <= last; ++n) {
        const double d = signal_derivative(s0, n, from_level);
        sum += trapezoid(n, from_level, last) * (s0[n] * s0[n] + d * d);
    }
    return std::sqrt(sum * s0.dt());
}

double h1_star_norm(const TimeSignal& s0) {
    const auto cut = s0.cutoff_index();
    return h1_star_norm(s0, cut == TimeSignal::npos ? 0 : cut);
}

double dual_pairing_factored(const TimeSignal& s0, const TimeSignal& phi, const TimeSignal& q,
                             std::size_t from_level) {
    if (s0.size() != phi.size() || s0.size() != q.size())
        throw ContractError("factored pairing: signals have different lengths");
    const std::size_t last = s0.size() - 1;
    if (std::abs(phi[last]) > 1e-12 * std::max(phi.max_abs(), 1e-300))
        throw ContractError("factored pairing: phi(T) must vanish");
    if (from_level + 2 > last) throw ContractError("factored pairing: fewer than three active levels");
    for (std::size_t n = 0; n < from_level; ++n)
        if (s0[n] != 0.0) throw ContractError("factored pairing: s0 must vanish before the cutoff");
    double sum = 0.0;
    for (std::size_t n = from_level; n <= last; ++n)
        sum += trapezoid(n, from_level, last) * signal_derivative(s0, n, from_level) * phi[n] * q[n];
    return -sum * s0.dt();
}

double empirical_observability_ratio(const CoefficientField& field, const Grid1D& grid, const TimeSignal& s0) {
    const auto psi = solve_adjoint(field, grid, s0);
    const auto trace = extract_flux(psi, field, Side::left);
    double sum = 0.0;
    const std::size_t last = trace.size() - 1;
    for (std::size_t n = 0; n <= last; ++n) sum += trapezoid(n, 0, last) * trace[n] * trace[n];
    const double observed = std::sqrt(sum * grid.dt());
    const double norm = h1_star_norm(s0, cutoff_level(field, grid));
    if (observed == 0.0) {
        if (norm == 0.0) throw ContractError("observability ratio undefined for s0 = 0");
        throw ContractError("zero boundary observation for nonzero s0: solver failure");
    }
    return norm / observed;
}

AdmissibleSampler::AdmissibleSampler(const CoefficientField& field, const Grid1D& grid, std::uint64_t seed,
                                     std::size_t modes, bool open_end)
    : grid_(grid), cut_(cutoff_level(field, grid)), modes_(modes), open_end_(open_end), state_(seed) {
    if (cut_ + 3 > grid.steps) throw ContractError("sampler: T must exceed L*beta by a few time steps");
    if (modes_ == 0) throw ContractError("sampler: need at least one mode");
}

double AdmissibleSampler::uniform() {
    // SplitMix64 step; the top 53 bits give a double in [0, 1).
    state_ += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    z ^= z >> 31;
    return 2.0 * static_cast<double>(z >> 11) * 0x1.0p-53 - 1.0;
}

TimeSignal AdmissibleSampler::next() {
    std::vector<double> cos_c(modes_), sin_c(modes_);
    for (std::size_t k = 0; k < modes_; ++k) {
        cos_c[k] = uniform() / static_cast<double>(k + 1);
        sin_c[k] = uniform() / static_cast<double>(k + 1);
    }
    const double t0 = grid_.t(cut_);
    const double span = grid_.horizon - t0;
    std::vector<double> v(grid_.levels(), 0.0);
    for (std::size_t n = cut_ + 1; n <= grid_.steps; ++n) {
        const double tau = (grid_.t(n) - t0) / span;
        double sum = 0.0;
        for (std::size_t k = 0; k < modes_; ++k) {
            const double arg = std::numbers::pi * static_cast<double>(k + 1) * tau;
            sum += cos_c[k] * std::cos(arg) + sin_c[k] * std::sin(arg);
        }
        const double ramp = open_end_ ? std::sin(0.5 * std::numbers::pi * tau) : std::sin(std::numbers::pi * tau);
        v[n] = sum * ramp * ramp;
    }
    if (!open_end_) v[grid_.steps] = 0.0;
    return TimeSignal(0.0, grid_.dt(), std::move(v), t0);
}

double default_disc_tol(std::size_t cells) { return 0.15 * 200.0 / static_cast<double>(cells); }

ObservabilityReport observability_report(const CoefficientField& field, const Grid1D& grid,
                                         const ObservabilityOptions& options) {
    const double min_time = minimal_control_time(field);
    if (!(grid.horizon > min_time)) throw MinimalTimeError(grid.horizon, min_time);

    ObservabilityReport report;
    report.beta = beta(field);
    report.min_time = min_time;
    report.c1_theoretical = theoretical_observability_constant(field);
    report.disc_tol = options.disc_tol >= 0.0 ? options.disc_tol : default_disc_tol(grid.cells);
    report.bound_margin = report.trace_margin = report.velocity_margin = std::numeric_limits<double>::infinity();

    AdmissibleSampler sampler(field, grid, options.seed, options.modes);
    const std::size_t cut = cutoff_level(field, grid);
    for (std::size_t k = 0; k < options.samples; ++k) {
        const auto s0 = sampler.next();
        const auto psi = solve_adjoint(field, grid, s0);
        const auto ext = extend_parity(psi);
        const auto check = check_energy_bound(ext, field);
        const double norm = h1_star_norm(s0, cut);
        const double observed = std::sqrt(check.observed);
        if (observed == 0.0) throw ContractError("zero boundary observation for nonzero s0: solver failure");
        const double ratio = norm / observed;
        report.ratios.push_back(ratio);
        report.c2_empirical = std::max(report.c2_empirical, observed / norm);
        if (ratio > report.c1_theoretical * (1.0 + report.disc_tol)) ++report.ratio_violations;
        report.bound_margin = std::min(report.bound_margin, check.energy_margin);
        report.trace_margin = std::min(report.trace_margin, check.trace_margin);
        report.velocity_margin = std::min(report.velocity_margin, check.velocity_margin);
        if (std::min({check.energy_margin, check.trace_margin, check.velocity_margin}) < -report.disc_tol)
            ++report.bound_violations;
        if (k == 0) report.f_profile = check.f_profile;
    }
    if (options.samples == 0) report.bound_margin = report.trace_margin = report.velocity_margin = 0.0;
    return report;
}

}  // namespace sidewise
