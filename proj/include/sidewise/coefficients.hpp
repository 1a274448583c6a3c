#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace sidewise {

/// Density rho(x) and stiffness a(x) of the string, stored as node samples on a
/// uniform grid of [0, L] and interpreted as piecewise-linear in between.
///
/// Both arrays must have the same length (at least two nodes) and strictly
/// positive entries. Piecewise-constant coefficients are represented with a
/// one-cell linear ramp at each jump, which keeps the total variation exact.
class CoefficientField {
public:
    CoefficientField(double length, std::vector<double> rho, std::vector<double> a);

    static CoefficientField constant(double length, double rho, double a, std::size_t cells = 1);

    /// Piecewise-constant pieces separated at `breakpoints` (strictly increasing,
    /// inside (0, L)), sampled on `cells` uniform cells. A node lying exactly on
    /// a breakpoint takes the left value; the jump is spread over the cell that
    /// contains the breakpoint.
    static CoefficientField piecewise_constant(double length, std::span<const double> breakpoints,
                                               std::span<const double> rho_values,
                                               std::span<const double> a_values, std::size_t cells);

    double length() const noexcept { return length_; }
    std::size_t cells() const noexcept { return rho_.size() - 1; }
    std::size_t nodes() const noexcept { return rho_.size(); }
    double dx() const noexcept { return length_ / static_cast<double>(cells()); }

    std::span<const double> rho() const noexcept { return rho_; }
    std::span<const double> a() const noexcept { return a_; }

    double rho_at(double x) const;
    double a_at(double x) const;

    /// Samples of the piecewise-linear interpolant on `cells` uniform cells.
    CoefficientField resampled(std::size_t cells) const;

    bool is_unit(double tol = 1e-14) const;

private:
    double length_;
    std::vector<double> rho_;
    std::vector<double> a_;
};

struct CoefficientBounds {
    double rho0;
    double rho1;
    double a0;
    double a1;
};

struct TotalVariation {
    double rho;
    double a;
};

CoefficientBounds bounds(const CoefficientField& field);

TotalVariation total_variation(const CoefficientField& field);

/// Maximal slowness sup sqrt(rho/a); L*beta is the minimal control time.
double beta(const CoefficientField& field);

/// Maximal local wave speed max sqrt(a/rho), used for the CFL restriction.
double max_wave_speed(const CoefficientField& field);

inline double minimal_control_time(const CoefficientField& field) {
    return field.length() * beta(field);
}

/// exp(TV(rho)/rho0 + TV(a)/a0), the growth factor of the sidewise energy.
double variation_growth_factor(const CoefficientField& field);

/// Explicit constant C1 of the sidewise observability inequality,
/// C1^2 = (L^2/min{rho0, a0} + 1/rho(L)) * a(0) * exp(TV(rho)/rho0 + TV(a)/a0).
double theoretical_observability_constant(const CoefficientField& field);

}  // namespace sidewise
