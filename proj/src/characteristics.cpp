#include "sidewise/characteristics.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "sidewise/errors.hpp"
#include "sidewise/leapfrog.hpp"
#include "sidewise/wave_solver.hpp"

namespace sidewise {

namespace {

constexpr double kSlack = 1e-9;

double forward_slope(const TimeSignal& s, double t) {
    const double h = s.dt();
    return (-3.0 * s.at(t) + 4.0 * s.at(t + h) - s.at(t + 2.0 * h)) / (2.0 * h);
}

double backward_slope(const TimeSignal& s, double t) {
    const double h = s.dt();
    return (3.0 * s.at(t) - 4.0 * s.at(t - h) + s.at(t - 2.0 * h)) / (2.0 * h);
}

TimeSignal resolve_f(const SpliceSpec& spec, const Grid1D& grid) {
    if (spec.f.empty()) return TimeSignal::zeros(grid);
    std::vector<double> v(grid.levels());
    for (std::size_t n = 0; n < v.size(); ++n) v[n] = spec.f.at(grid.t(n));
    return {0.0, grid.dt(), std::move(v)};
}

void check_step1_grid(const SpliceSpec& spec, const Grid1D& grid) {
    if (std::abs(grid.length - spec.length) > kSlack * spec.length ||
        std::abs(grid.horizon - spec.length) > kSlack * spec.length)
        throw ContractError("step 1 needs a grid over [0, L] x [0, L]");
}

}  // namespace

void SpliceSpec::validate() const {
    if (!(length > 0.0)) throw ContractError("splice: length must be positive");
    if (!(t_bar > length)) throw ContractError("splice: t_bar must exceed L");
    if (!(horizon > t_bar)) throw ContractError("splice: T must exceed t_bar");
    if (q.empty()) throw ContractError("splice: target q is empty");
    const double tol = kSlack * horizon + 0.5 * q.dt();
    if (q.t_start() > t_bar + tol || q.t_end() < horizon - tol)
        throw ContractError("splice: q must cover [t_bar, T]");
}

void check_compatibility(const TimeSignal& f) {
    if (f.size() < 4) return;
    const double scale = f.max_abs();
    if (scale == 0.0) return;
    const double h = f.dt();
    const double span = f.t_end() - f.t_start();
    const double d1 = (-3.0 * f[0] + 4.0 * f[1] - f[2]) / (2.0 * h);
    const double d2 = (2.0 * f[0] - 5.0 * f[1] + 4.0 * f[2] - f[3]) / (h * h);
    if (std::abs(f[0]) > 1e-9 * scale)
        throw ContractError("artificial datum violates f(0) = 0");
    if (std::abs(d1) * span > 0.1 * scale)
        throw ContractError("artificial datum violates f'(0) = 0");
    if (std::abs(d2) * span * span > 1.0 * scale)
        throw ContractError("artificial datum violates f''(0) = 0");
}

SpaceTimeField step1_field(const SpliceSpec& spec, const Grid1D& grid) {
    check_step1_grid(spec, grid);
    // Checked at the datum's own resolution; one-sided differences on a coarse
    // step-1 grid are too inaccurate to decide f''(0) = 0.
    check_compatibility(spec.f);
    const auto f = resolve_f(spec, grid);
    const auto unit = CoefficientField::constant(spec.length, 1.0, 1.0);
    const std::vector<double> zero(grid.nodes(), 0.0);
    return solve_forward(unit, grid, zero, zero, f, TimeSignal::zeros(grid));
}

TimeSignal step1_flux_trace(const SpliceSpec& spec, const Grid1D& grid) {
    const auto y = step1_field(spec, grid);
    return extract_flux(y, CoefficientField::constant(spec.length, 1.0, 1.0), Side::right);
}

HermiteCubic::HermiteCubic(double v_left, double d_left, double v_right, double d_right,
                           double t_left, double t_right)
    : t0_(t_left), t1_(t_right), v0_(v_left), d0_(d_left), v1_(v_right), d1_(d_right) {
    if (!(t_right > t_left)) throw ContractError("hermite bridge: degenerate interval");
}

double HermiteCubic::value(double t) const noexcept {
    const double h = t1_ - t0_;
    const double s = (t - t0_) / h;
    const double s2 = s * s, s3 = s2 * s;
    return (2.0 * s3 - 3.0 * s2 + 1.0) * v0_ + (s3 - 2.0 * s2 + s) * h * d0_ +
           (-2.0 * s3 + 3.0 * s2) * v1_ + (s3 - s2) * h * d1_;
}

double HermiteCubic::derivative(double t) const noexcept {
    const double h = t1_ - t0_;
    const double s = (t - t0_) / h;
    const double s2 = s * s;
    return ((6.0 * s2 - 6.0 * s) * v0_ + (-6.0 * s2 + 6.0 * s) * v1_) / h +
           (3.0 * s2 - 4.0 * s + 1.0) * d0_ + (3.0 * s2 - 2.0 * s) * d1_;
}

HermiteCubic hermite_bridge(double v_left, double d_left, double v_right, double d_right,
                            double t_left, double t_right) {
    return {v_left, d_left, v_right, d_right, t_left, t_right};
}

SplicedProfile::SplicedProfile(TimeSignal alpha, TimeSignal q, const SpliceSpec& spec)
    : alpha_(std::move(alpha)),
      q_(std::move(q)),
      length_(spec.length),
      t_bar_(spec.t_bar),
      bridge_(alpha_.at(spec.length), backward_slope(alpha_, spec.length), q_.at(spec.t_bar),
              forward_slope(q_, spec.t_bar), spec.length, spec.t_bar) {}

double SplicedProfile::operator()(double t) const noexcept {
    if (t <= length_) return alpha_.at(t);
    if (t < t_bar_) return bridge_.value(t);
    return q_.at(t);
}

TimeSignal SplicedProfile::sample(const Grid1D& grid) const {
    std::vector<double> v(grid.levels());
    for (std::size_t n = 0; n < v.size(); ++n) v[n] = (*this)(grid.t(n));
    return {0.0, grid.dt(), std::move(v)};
}

SplicedProfile splice_profile(const TimeSignal& alpha, const TimeSignal& q, const SpliceSpec& spec) {
    return {alpha, q, spec};
}

SpaceProfile default_phi(const TimeSignal& c, double length) {
    const double slope = c.values().empty() ? 0.0 : c.values().back();
    return [slope, length](double x) { return slope * (x - length); };
}

SpaceTimeField leftward_solve(const TimeSignal& c, const SpaceProfile& phi, const Grid1D& grid) {
    grid.validate();
    const double dx = grid.dx();
    const double dt = grid.dt();
    if (dx > grid.cfl_safety * dt * (1.0 + 1e-12))
        throw CflError("sidewise march needs dx <= cfl_safety * dt (dx = " + std::to_string(dx) +
                       ", dt = " + std::to_string(dt) + ")");
    if (c.size() != grid.levels()) throw ContractError("leftward solve: c must live on the grid's time levels");
    if (!phi) throw ContractError("leftward solve: missing end profile phi");

    // phi(L) = 0, phi'(L) = c(T), phi''(L) = 0, checked with one-sided differences.
    const double L = grid.length;
    const double cT = c.values().back();
    double scale = c.max_abs() * L;
    for (std::size_t i = 0; i <= grid.cells; ++i) scale = std::max(scale, std::abs(phi(grid.x(i))));
    if (scale > 0.0) {
        const double p0 = phi(L), p1 = phi(L - dx), p2 = phi(L - 2.0 * dx), p3 = phi(L - 3.0 * dx);
        const double d1 = (3.0 * p0 - 4.0 * p1 + p2) / (2.0 * dx);
        const double d2 = (2.0 * p0 - 5.0 * p1 + 4.0 * p2 - p3) / (dx * dx);
        if (std::abs(p0) > 1e-9 * scale) throw ContractError("phi(L) must vanish");
        if (std::abs(d1 - cT) * L > 1e-2 * scale) throw ContractError("phi'(L) must equal c(T)");
        if (std::abs(d2) * L * L > 1e-1 * scale) throw ContractError("phi''(L) must vanish");
    }

    // Lattice of time nodes, marched in x with step dx.
    const auto kernel = LeapfrogKernel::unit(grid.levels(), dx, dt);
    const std::size_t top = grid.steps;
    std::vector<std::vector<double>> rows(grid.nodes(), std::vector<double>(grid.levels(), 0.0));
    std::vector<double> velocity(grid.levels());
    for (std::size_t n = 0; n < velocity.size(); ++n) velocity[n] = -c[n];

    const std::size_t last = grid.cells;
    kernel.start(rows[last], velocity, rows[last - 1]);
    rows[last - 1][0] = 0.0;
    rows[last - 1][top] = phi(grid.x(last - 1));
    for (std::size_t i = last - 1; i-- > 0;) {
        kernel.advance(rows[i + 2], rows[i + 1], rows[i]);
        rows[i][0] = 0.0;
        rows[i][top] = phi(grid.x(i));
    }

    SpaceTimeField y(grid);
    for (std::size_t i = 0; i <= last; ++i)
        for (std::size_t n = 0; n <= top; ++n) y(i, n) = rows[i][n];
    return y;
}

double verify_onesided_uniqueness(const SpaceTimeField& a, const SpaceTimeField& b) {
    const Grid1D& ga = a.grid();
    const Grid1D& gb = b.grid();
    if (!same_space_grid(ga, gb)) throw ContractError("uniqueness check: fields live on different space grids");
    const double t_max = std::min(ga.horizon, gb.horizon);
    double gap = 0.0;
    for (std::size_t i = 0; i < a.nodes(); ++i) {
        const double x = ga.x(i);
        for (std::size_t n = 0; n < a.levels(); ++n) {
            const double t = ga.t(n);
            if (t > x + kSlack || t > t_max + kSlack) break;
            gap = std::max(gap, std::abs(a(i, n) - b.at_time(i, t)));
        }
    }
    return gap;
}

CharacteristicsResult build_control(const SpliceSpec& spec, const CoefficientField& field,
                                    const CharacteristicsOptions& options) {
    if (!field.is_unit()) throw ContractError("the characteristics construction requires rho = a = 1");
    spec.validate();
    if (std::abs(field.length() - spec.length) > kSlack * spec.length)
        throw ContractError("splice length does not match the coefficient field");

    const Grid1D forward = Grid1D::for_field(field, options.cells, spec.horizon, options.cfl_safety);
    if (spec.t_bar <= spec.length + forward.dt())
        throw ContractError("t_bar must exceed L by more than one time step");

    CharacteristicsResult out;
    const Grid1D step1 = Grid1D::for_field(field, options.cells, spec.length, options.cfl_safety);
    const auto y_f = step1_field(spec, step1);
    out.alpha = extract_flux(y_f, field, Side::right);

    const SplicedProfile c(out.alpha, spec.q, spec);
    const Grid1D march = Grid1D::for_sidewise_march(spec.length, options.cells, spec.horizon, options.cfl_safety);
    out.profile = c.sample(march);
    const SpaceProfile phi = options.phi ? options.phi : default_phi(out.profile, spec.length);
    out.leftward = leftward_solve(out.profile, phi, march);
    out.triangle_gap = verify_onesided_uniqueness(y_f, out.leftward);

    const double dt_m = march.dt();
    for (std::size_t i = 0; i < march.nodes(); ++i) {
        const double yt = (-3.0 * out.leftward(i, 0) + 4.0 * out.leftward(i, 1) - out.leftward(i, 2)) / (2.0 * dt_m);
        out.step3_residual = std::max(out.step3_residual, std::abs(yt));
    }

    // v(t) = y(0, t), moved to the forward grid by linear interpolation.
    std::vector<double> trace(march.levels());
    for (std::size_t n = 0; n < trace.size(); ++n) trace[n] = out.leftward(0, n);
    const TimeSignal v_march(0.0, dt_m, std::move(trace));
    std::vector<double> v(forward.levels()), target(forward.levels());
    for (std::size_t n = 0; n < v.size(); ++n) {
        const double t = forward.t(n);
        v[n] = v_march.at(t);
        target[n] = t >= spec.t_bar - kSlack * spec.horizon ? spec.q.at(t) : 0.0;
    }

    ControlResult& result = out.control;
    result.control = TimeSignal(0.0, forward.dt(), std::move(v));
    result.target = TimeSignal(0.0, forward.dt(), std::move(target));
    const std::vector<double> zero(forward.nodes(), 0.0);
    const auto y = solve_forward(field, forward, zero, zero, result.control, TimeSignal::zeros(forward));
    result.achieved_flux = extract_flux(y, field, Side::right, FluxStencil::energy_consistent);

    // Tracking window: levels with t >= t_bar.
    const auto first = static_cast<std::size_t>(std::ceil(spec.t_bar / forward.dt() - 1e-9));
    result.tracking_level = first == 0 ? 0 : first - 1;
    std::vector<double> mismatch(forward.levels());
    for (std::size_t n = 0; n < mismatch.size(); ++n) mismatch[n] = result.achieved_flux[n] - result.target[n];
    const double q_norm = window_norm(result.target, result.tracking_level);
    const double e_norm = window_norm(TimeSignal(0.0, forward.dt(), std::move(mismatch)), result.tracking_level);
    result.tracking_error_l2 = q_norm > 0.0 ? e_norm / q_norm : e_norm;
    result.converged = result.tracking_error_l2 <= options.tracking_tol;
    if (!result.converged)
        result.message = "tracking error " + std::to_string(result.tracking_error_l2) + " exceeds tolerance";
    return out;
}

}  // namespace sidewise
