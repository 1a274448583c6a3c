#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

#include "sidewise/grid.hpp"

namespace sidewise {

/// Grid function y(x_i, t_n) stored row-major by time level.
class SpaceTimeField {
public:
    SpaceTimeField() = default;
    explicit SpaceTimeField(const Grid1D& grid);
    SpaceTimeField(const Grid1D& grid, std::vector<double> values);

    const Grid1D& grid() const noexcept { return grid_; }
    std::size_t nodes() const noexcept { return grid_.nodes(); }
    std::size_t levels() const noexcept { return grid_.levels(); }

    double& operator()(std::size_t i, std::size_t n) noexcept { return data_[n * nodes() + i]; }
    double operator()(std::size_t i, std::size_t n) const noexcept { return data_[n * nodes() + i]; }

    std::span<double> level(std::size_t n) noexcept { return {data_.data() + n * nodes(), nodes()}; }
    std::span<const double> level(std::size_t n) const noexcept {
        return {data_.data() + n * nodes(), nodes()};
    }

    std::span<const double> values() const noexcept { return data_; }

    /// Linear interpolation in time at node i (t clamped to the horizon).
    double at_time(std::size_t i, double t) const noexcept;

    double max_abs() const noexcept;

    /// Field with levels in reverse order (t -> T - t).
    SpaceTimeField time_reversed() const;

    /// Plot-ready CSV: header "t,<x_0>,...,<x_N>", then one row per time level.
    void write_csv(std::ostream& out) const;

    /// Little-endian binary dump: L and T as float64, N and M as uint64, then
    /// (M+1) x (N+1) float64 values, row-major by time level.
    void write_binary(std::ostream& out) const;
    static SpaceTimeField read_binary(std::istream& in);

private:
    Grid1D grid_;
    std::vector<double> data_;
};

}  // namespace sidewise
