#pragma once

#include <cstddef>

namespace sidewise {

class CoefficientField;

/// Uniform space-time discretization of [0, L] x [0, T]: `cells` space cells
/// (cells + 1 nodes) and `steps` time steps (steps + 1 levels).
struct Grid1D {
    double length = 1.0;
    std::size_t cells = 2;
    double horizon = 1.0;
    std::size_t steps = 2;
    double cfl_safety = 0.9;

    double dx() const noexcept { return length / static_cast<double>(cells); }
    double dt() const noexcept { return horizon / static_cast<double>(steps); }
    double x(std::size_t i) const noexcept { return static_cast<double>(i) * dx(); }
    double t(std::size_t n) const noexcept { return static_cast<double>(n) * dt(); }
    std::size_t nodes() const noexcept { return cells + 1; }
    std::size_t levels() const noexcept { return steps + 1; }

    /// Nearest time level to t (clamped to [0, steps]).
    std::size_t time_index(double t) const noexcept;

    /// Throws ContractError on non-positive sizes or cfl_safety outside (0, 1).
    void validate() const;

    /// dt * max sqrt(a/rho) / dx.
    double courant_number(const CoefficientField& field) const;

    /// Smallest number of time steps keeping the explicit scheme within cfl_safety.
    static Grid1D for_field(const CoefficientField& field, std::size_t cells, double horizon,
                            double cfl_safety = 0.9);

    /// Grid for marching in x with unit wave speed: dx <= cfl_safety * dt.
    static Grid1D for_sidewise_march(double length, std::size_t cells, double horizon,
                                     double cfl_safety = 0.9);
};

bool same_space_grid(const Grid1D& a, const Grid1D& b) noexcept;

}  // namespace sidewise
