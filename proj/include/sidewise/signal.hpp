#pragma once

#include <cstddef>
#include <functional>
#include <limits>
#include <span>
#include <vector>

#include "sidewise/grid.hpp"

namespace sidewise {

/// Scalar function of time sampled at t_start + n*dt.
///
/// A signal may carry an activity cutoff: every sample at a time <= active_from
/// is exactly zero. This is how boundary data of the class H^1_* (vanishing on
/// [0, L*beta]) are represented.
class TimeSignal {
public:
    static constexpr double always_active = -std::numeric_limits<double>::infinity();

    TimeSignal() = default;
    TimeSignal(double t_start, double dt, std::vector<double> values,
               double active_from = always_active);

    static TimeSignal zeros(const Grid1D& grid, double active_from = always_active);

    /// Samples f at the grid's time levels, forcing zeros at times <= active_from.
    static TimeSignal sample(const Grid1D& grid, const std::function<double(double)>& f,
                             double active_from = always_active);

    double t_start() const noexcept { return t_start_; }
    double dt() const noexcept { return dt_; }
    double t_end() const noexcept;
    double active_from() const noexcept { return active_from_; }
    std::size_t size() const noexcept { return values_.size(); }
    bool empty() const noexcept { return values_.empty(); }
    double time(std::size_t n) const noexcept { return t_start_ + static_cast<double>(n) * dt_; }

    double operator[](std::size_t n) const noexcept { return values_[n]; }
    std::span<const double> values() const noexcept { return values_; }

    /// Linear interpolation; zero outside [t_start, t_end].
    double at(double t) const noexcept;

    /// Largest index whose time is <= active_from (npos when always active).
    std::size_t cutoff_index() const noexcept;

    /// Copy with a new cutoff; samples at times <= cutoff are zeroed.
    TimeSignal masked(double cutoff) const;

    /// Linear resampling onto the time levels of `grid`, keeping the cutoff.
    TimeSignal resampled(const Grid1D& grid) const;

    TimeSignal reversed() const;

    double max_abs() const noexcept;

    static constexpr std::size_t npos = static_cast<std::size_t>(-1);

private:
    double t_start_ = 0.0;
    double dt_ = 1.0;
    std::vector<double> values_;
    double active_from_ = always_active;
};

}  // namespace sidewise
