#include "sidewise/coefficients.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "sidewise/errors.hpp"

namespace sidewise {

namespace {

double interpolate(std::span<const double> samples, double length, double x) {
    const auto cells = samples.size() - 1;
    const double h = length / static_cast<double>(cells);
    const double s = std::clamp(x, 0.0, length) / h;
    const auto i = std::min(static_cast<std::size_t>(s), cells - 1);
    const double w = s - static_cast<double>(i);
    return (1.0 - w) * samples[i] + w * samples[i + 1];
}

double variation(std::span<const double> v) {
    double tv = 0.0;
    for (std::size_t i = 0; i + 1 < v.size(); ++i) tv += std::abs(v[i + 1] - v[i]);
    return tv;
}

}  // namespace

CoefficientField::CoefficientField(double length, std::vector<double> rho, std::vector<double> a)
    : length_(length), rho_(std::move(rho)), a_(std::move(a)) {
    if (!(length_ > 0.0) || !std::isfinite(length_))
        throw ContractError("coefficient field: length must be positive");
    if (rho_.size() != a_.size())
        throw ContractError("coefficient field: rho and a must have the same number of samples");
    if (rho_.size() < 2)
        throw ContractError("coefficient field: at least two nodes are required");
    for (std::size_t i = 0; i < rho_.size(); ++i) {
        if (!(rho_[i] > 0.0) || !(a_[i] > 0.0) || !std::isfinite(rho_[i]) || !std::isfinite(a_[i]))
            throw ContractError("coefficient field: samples must be positive and finite (node " +
                                std::to_string(i) + ")");
    }
}

CoefficientField CoefficientField::constant(double length, double rho, double a, std::size_t cells) {
    if (cells < 1) throw ContractError("coefficient field: cells must be >= 1");
    return {length, std::vector<double>(cells + 1, rho), std::vector<double>(cells + 1, a)};
}

CoefficientField CoefficientField::piecewise_constant(double length,
                                                      std::span<const double> breakpoints,
                                                      std::span<const double> rho_values,
                                                      std::span<const double> a_values,
                                                      std::size_t cells) {
    if (rho_values.size() != breakpoints.size() + 1 || a_values.size() != breakpoints.size() + 1)
        throw ContractError("piecewise coefficients: need one value per piece");
    for (std::size_t k = 0; k < breakpoints.size(); ++k) {
        if (!(breakpoints[k] > 0.0 && breakpoints[k] < length) ||
            (k > 0 && !(breakpoints[k] > breakpoints[k - 1])))
            throw ContractError("piecewise coefficients: breakpoints must increase inside (0, L)");
    }
    if (cells < 1) throw ContractError("coefficient field: cells must be >= 1");

    const double h = length / static_cast<double>(cells);
    std::vector<double> rho(cells + 1);
    std::vector<double> a(cells + 1);
    for (std::size_t i = 0; i <= cells; ++i) {
        const double x = static_cast<double>(i) * h;
        // number of breakpoints strictly left of x; a node on a breakpoint keeps the left piece
        const auto piece = static_cast<std::size_t>(
            std::lower_bound(breakpoints.begin(), breakpoints.end(), x - 1e-12 * h) -
            breakpoints.begin());
        rho[i] = rho_values[piece];
        a[i] = a_values[piece];
    }
    return {length, std::move(rho), std::move(a)};
}

double CoefficientField::rho_at(double x) const { return interpolate(rho_, length_, x); }

double CoefficientField::a_at(double x) const { return interpolate(a_, length_, x); }

CoefficientField CoefficientField::resampled(std::size_t new_cells) const {
    if (new_cells == cells()) return *this;
    if (new_cells < 1) throw ContractError("coefficient field: cells must be >= 1");
    const double h = length_ / static_cast<double>(new_cells);
    std::vector<double> rho(new_cells + 1);
    std::vector<double> a(new_cells + 1);
    for (std::size_t i = 0; i <= new_cells; ++i) {
        const double x = static_cast<double>(i) * h;
        rho[i] = rho_at(x);
        a[i] = a_at(x);
    }
    return {length_, std::move(rho), std::move(a)};
}

bool CoefficientField::is_unit(double tol) const {
    const auto off = [tol](double v) { return std::abs(v - 1.0) > tol; };
    return std::none_of(rho_.begin(), rho_.end(), off) && std::none_of(a_.begin(), a_.end(), off);
}

CoefficientBounds bounds(const CoefficientField& field) {
    const auto [rho0, rho1] = std::minmax_element(field.rho().begin(), field.rho().end());
    const auto [a0, a1] = std::minmax_element(field.a().begin(), field.a().end());
    return {*rho0, *rho1, *a0, *a1};
}

TotalVariation total_variation(const CoefficientField& field) {
    return {variation(field.rho()), variation(field.a())};
}

double beta(const CoefficientField& field) {
    // rho/a restricted to a segment is a ratio of two linear functions, hence
    // monotone; its supremum is attained at a node.
    double worst = 0.0;
    for (std::size_t i = 0; i < field.nodes(); ++i)
        worst = std::max(worst, field.rho()[i] / field.a()[i]);
    return std::sqrt(worst);
}

double max_wave_speed(const CoefficientField& field) {
    double worst = 0.0;
    for (std::size_t i = 0; i < field.nodes(); ++i)
        worst = std::max(worst, field.a()[i] / field.rho()[i]);
    return std::sqrt(worst);
}

double variation_growth_factor(const CoefficientField& field) {
    const auto b = bounds(field);
    const auto tv = total_variation(field);
    return std::exp(tv.rho / b.rho0 + tv.a / b.a0);
}

double theoretical_observability_constant(const CoefficientField& field) {
    const auto b = bounds(field);
    const double length = field.length();
    const double rho_end = field.rho().back();
    const double a_start = field.a().front();
    const double c1_squared = (length * length / std::min(b.rho0, b.a0) + 1.0 / rho_end) * a_start *
                              variation_growth_factor(field);
    return std::sqrt(c1_squared);
}

}  // namespace sidewise
