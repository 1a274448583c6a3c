#pragma once

#include <cstddef>
#include <span>

#include "sidewise/coefficients.hpp"
#include "sidewise/field.hpp"
#include "sidewise/grid.hpp"
#include "sidewise/signal.hpp"

namespace sidewise {

enum class Side { left, right };

/// How a boundary flux y_x is read off a discrete solution.
enum class FluxStencil {
    /// Second-order one-sided difference, e.g. (3y_N - 4y_{N-1} + y_{N-2}) / (2dx).
    one_sided,
    /// Boundary residual of the scheme: the half-cell balance
    /// a y_x(L) = a_{N-1/2}(y_N - y_{N-1})/dx + dx/2 rho_N (y_N)_tt, divided by a(L).
    /// Second-order accurate and exactly dual to the Dirichlet data of the
    /// adjoint scheme under trapezoidal time weights.
    energy_consistent,
};

/// Time level closest to L*beta; every (L*beta, T) restriction uses this index.
std::size_t cutoff_level(const CoefficientField& field, const Grid1D& grid);

/// Explicit solution of rho y_tt = (a y_x)_x with y(0,t) = u_left(t),
/// y(L,t) = g_right(t), y(.,0) = y0, y_t(.,0) = y1.
///
/// Coefficients are resampled onto the grid nodes when their sampling differs.
/// Boundary data are imposed strongly at every level, including t = 0, so a
/// control that is incompatible with y0 at the corner is accepted (the jump is
/// propagated as in the transposition solution). Throws CflError when the
/// Courant number exceeds grid.cfl_safety and ContractError on size mismatches.
SpaceTimeField solve_forward(const CoefficientField& field, const Grid1D& grid,
                             std::span<const double> y0, std::span<const double> y1,
                             const TimeSignal& u_left, const TimeSignal& g_right);

/// Backward adjoint problem: psi(.,T) = psi_t(.,T) = 0, psi(0,.) = 0, psi(L,.) = s.
/// Solved by the substitution tau = T - t and the forward stepper. `s` must
/// vanish at every level up to cutoff_level(field, grid).
SpaceTimeField solve_adjoint(const CoefficientField& field, const Grid1D& grid, const TimeSignal& s);

TimeSignal extract_flux(const SpaceTimeField& y, const CoefficientField& field, Side side,
                        FluxStencil stencil = FluxStencil::one_sided);

/// E(n) = 1/2 sum_i w_i [rho_i ((y_i^{n+1} - y_i^{n-1})/(2dt))^2 + a_i (y_x)_i^2] dx with
/// trapezoidal weights w_i, centered y_x inside and one-sided at the ends.
/// Requires 1 <= n <= M-1.
double discrete_energy(const SpaceTimeField& y, const CoefficientField& field, std::size_t n);

}  // namespace sidewise
