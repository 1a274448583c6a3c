#include "sidewise/grid.hpp"

#include <algorithm>
#include <cmath>

#include "sidewise/coefficients.hpp"
#include "sidewise/errors.hpp"

namespace sidewise {

std::size_t Grid1D::time_index(double time) const noexcept {
    const double r = std::round(time / dt());
    if (!(r > 0.0)) return 0;
    return std::min(static_cast<std::size_t>(r), steps);
}

void Grid1D::validate() const {
    if (!(length > 0.0) || !(horizon > 0.0) || !std::isfinite(length) || !std::isfinite(horizon))
        throw ContractError("grid: length and horizon must be positive");
    if (cells < 2) throw ContractError("grid: at least two space cells are required");
    if (steps < 2) throw ContractError("grid: at least two time steps are required");
    if (!(cfl_safety > 0.0 && cfl_safety < 1.0))
        throw ContractError("grid: cfl_safety must lie in (0, 1)");
}

double Grid1D::courant_number(const CoefficientField& field) const {
    return dt() * max_wave_speed(field) / dx();
}

Grid1D Grid1D::for_field(const CoefficientField& field, std::size_t cells, double horizon,
                         double cfl_safety) {
    Grid1D g;
    g.length = field.length();
    g.cells = cells;
    g.horizon = horizon;
    g.cfl_safety = cfl_safety;
    const double speed = max_wave_speed(field);
    const double exact = horizon * speed / (g.dx() * cfl_safety);
    // guard against ceil() of a value that is integral up to rounding
    g.steps = std::max<std::size_t>(2, static_cast<std::size_t>(std::ceil(exact - 1e-9)));
    if (g.courant_number(field) > cfl_safety) ++g.steps;
    g.validate();
    return g;
}

Grid1D Grid1D::for_sidewise_march(double length, std::size_t cells, double horizon,
                                  double cfl_safety) {
    Grid1D g;
    g.length = length;
    g.cells = cells;
    g.horizon = horizon;
    g.cfl_safety = cfl_safety;
    const double exact = cfl_safety * horizon / g.dx();
    g.steps = std::max<std::size_t>(2, static_cast<std::size_t>(std::floor(exact + 1e-9)));
    if (g.dx() > cfl_safety * g.dt() * (1.0 + 1e-12) && g.steps > 2) --g.steps;
    g.validate();
    return g;
}

bool same_space_grid(const Grid1D& a, const Grid1D& b) noexcept {
    return a.cells == b.cells && std::abs(a.length - b.length) <= 1e-12 * a.length;
}

}  // namespace sidewise
