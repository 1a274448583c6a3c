#include "sidewise/wave_solver.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "sidewise/errors.hpp"
#include "sidewise/leapfrog.hpp"

namespace sidewise {

namespace {

void check_signal(const TimeSignal& s, const Grid1D& grid, const char* name) {
    if (s.size() != grid.levels())
        throw ContractError(std::string(name) + ": expected " + std::to_string(grid.levels()) +
                            " samples, got " + std::to_string(s.size()));
    if (std::abs(s.dt() - grid.dt()) > 1e-12 * grid.dt() || std::abs(s.t_start()) > 1e-12 * grid.dt())
        throw ContractError(std::string(name) + ": not sampled on the grid's time levels");
}

void check_grid(const CoefficientField& field, const Grid1D& grid) {
    grid.validate();
    if (std::abs(grid.length - field.length()) > 1e-12 * field.length())
        throw ContractError("grid length does not match the coefficient field");
    const double courant = grid.courant_number(field);
    if (courant > grid.cfl_safety * (1.0 + 1e-12))
        throw CflError("CFL violation: courant number " + std::to_string(courant) +
                       " exceeds safety factor " + std::to_string(grid.cfl_safety));
}

// Second time difference of a boundary trace; one-sided at the end levels.
double second_time_difference(const SpaceTimeField& y, std::size_t i, std::size_t n) {
    const std::size_t last = y.levels() - 1;
    const double dt2 = y.grid().dt() * y.grid().dt();
    if (n > 0 && n < last) return (y(i, n + 1) - 2.0 * y(i, n) + y(i, n - 1)) / dt2;
    if (last < 3) return 0.0;
    if (n == 0) return (2.0 * y(i, 0) - 5.0 * y(i, 1) + 4.0 * y(i, 2) - y(i, 3)) / dt2;
    return (2.0 * y(i, last) - 5.0 * y(i, last - 1) + 4.0 * y(i, last - 2) - y(i, last - 3)) / dt2;
}

}  // namespace

std::size_t cutoff_level(const CoefficientField& field, const Grid1D& grid) {
    return grid.time_index(minimal_control_time(field));
}

SpaceTimeField solve_forward(const CoefficientField& field, const Grid1D& grid,
                             std::span<const double> y0, std::span<const double> y1,
                             const TimeSignal& u_left, const TimeSignal& g_right) {
    check_grid(field, grid);
    check_signal(u_left, grid, "left boundary data");
    check_signal(g_right, grid, "right boundary data");
    if (y0.size() != grid.nodes() || y1.size() != grid.nodes())
        throw ContractError("initial data must have one sample per space node");

    const auto kernel = LeapfrogKernel::for_wave(field.resampled(grid.cells), grid);
    const std::size_t last = grid.cells;
    SpaceTimeField y(grid);

    auto level0 = y.level(0);
    for (std::size_t i = 1; i < last; ++i) level0[i] = y0[i];
    level0[0] = u_left[0];
    level0[last] = g_right[0];

    auto level1 = y.level(1);
    kernel.start(level0, y1, level1);
    level1[0] = u_left[1];
    level1[last] = g_right[1];

    for (std::size_t n = 1; n < grid.steps; ++n) {
        auto next = y.level(n + 1);
        kernel.advance(y.level(n - 1), y.level(n), next);
        next[0] = u_left[n + 1];
        next[last] = g_right[n + 1];
    }
    return y;
}

SpaceTimeField solve_adjoint(const CoefficientField& field, const Grid1D& grid, const TimeSignal& s) {
    check_signal(s, grid, "adjoint boundary data");
    const std::size_t cut = cutoff_level(field, grid);
    for (std::size_t n = 0; n <= cut && n < s.size(); ++n) {
        if (s[n] != 0.0)
            throw ContractError("adjoint boundary data must vanish up to t = L*beta (level " +
                                std::to_string(cut) + "); nonzero at level " + std::to_string(n));
    }
    const std::vector<double> zero(grid.nodes(), 0.0);
    const auto reversed = solve_forward(field, grid, zero, zero, TimeSignal::zeros(grid), s.reversed());
    return reversed.time_reversed();
}

TimeSignal extract_flux(const SpaceTimeField& y, const CoefficientField& field, Side side,
                        FluxStencil stencil) {
    const Grid1D& g = y.grid();
    if (g.cells < 2) throw ContractError("flux extraction needs at least two cells");
    const double dx = g.dx();
    const std::size_t last = g.cells;
    std::vector<double> flux(y.levels());

    if (stencil == FluxStencil::one_sided) {
        for (std::size_t n = 0; n < y.levels(); ++n) {
            flux[n] = side == Side::right
                          ? (3.0 * y(last, n) - 4.0 * y(last - 1, n) + y(last - 2, n)) / (2.0 * dx)
                          : (-3.0 * y(0, n) + 4.0 * y(1, n) - y(2, n)) / (2.0 * dx);
        }
    } else {
        const auto local = field.resampled(g.cells);
        const auto rho = local.rho();
        const auto a = local.a();
        for (std::size_t n = 0; n < y.levels(); ++n) {
            if (side == Side::right) {
                const double face = 2.0 * a[last - 1] * a[last] / (a[last - 1] + a[last]);
                const double balance = face * (y(last, n) - y(last - 1, n)) / dx +
                                       0.5 * dx * rho[last] * second_time_difference(y, last, n);
                flux[n] = balance / a[last];
            } else {
                const double face = 2.0 * a[0] * a[1] / (a[0] + a[1]);
                const double balance = face * (y(1, n) - y(0, n)) / dx -
                                       0.5 * dx * rho[0] * second_time_difference(y, 0, n);
                flux[n] = balance / a[0];
            }
        }
    }
    return {0.0, g.dt(), std::move(flux)};
}

double discrete_energy(const SpaceTimeField& y, const CoefficientField& field, std::size_t n) {
    const Grid1D& g = y.grid();
    if (n < 1 || n + 1 >= y.levels())
        throw ContractError("discrete energy needs a centered time difference (1 <= n <= M-1)");
    const auto local = field.resampled(g.cells);
    const double dx = g.dx();
    const double dt = g.dt();
    const std::size_t last = g.cells;
    double sum = 0.0;
    for (std::size_t i = 0; i <= last; ++i) {
        const double yt = (y(i, n + 1) - y(i, n - 1)) / (2.0 * dt);
        double yx;
        if (i == 0)
            yx = (-3.0 * y(0, n) + 4.0 * y(1, n) - y(2, n)) / (2.0 * dx);
        else if (i == last)
            yx = (3.0 * y(last, n) - 4.0 * y(last - 1, n) + y(last - 2, n)) / (2.0 * dx);
        else
            yx = (y(i + 1, n) - y(i - 1, n)) / (2.0 * dx);
        const double w = (i == 0 || i == last) ? 0.5 : 1.0;
        sum += w * (local.rho()[i] * yt * yt + local.a()[i] * yx * yx);
    }
    return 0.5 * sum * dx;
}

}  // namespace sidewise
