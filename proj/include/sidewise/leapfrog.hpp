#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace sidewise {

class CoefficientField;
struct Grid1D;

/// Three-level explicit kernel for m_i v_tt = (k v_s)_s on a uniform lattice.
///
/// `mass` holds node weights m_i, `faces` the face stiffness k_{i+1/2}. The
/// kernel only updates interior nodes; callers own the boundary values. It is
/// used both for time marching of rho y_tt = (a y_x)_x and, with x and t
/// exchanged, for the sidewise march of y_xx = y_tt.
class LeapfrogKernel {
public:
    LeapfrogKernel(std::vector<double> mass, std::vector<double> faces, double step,
                   double spacing);

    /// Node weights rho_i and harmonic-mean faces 2 a_i a_{i+1} / (a_i + a_{i+1}).
    static LeapfrogKernel for_wave(const CoefficientField& field_on_grid, const Grid1D& grid);

    static LeapfrogKernel unit(std::size_t nodes, double step, double spacing);

    std::size_t nodes() const noexcept { return mass_.size(); }
    std::span<const double> mass() const noexcept { return mass_; }
    std::span<const double> faces() const noexcept { return faces_; }

    /// (k v_s)_s at interior node i, divided by spacing^2 (not by the mass).
    double divergence(std::span<const double> v, std::size_t i) const noexcept;

    /// Taylor start: next = cur + step*velocity + step^2/(2 m) (k cur_s)_s.
    void start(std::span<const double> cur, std::span<const double> velocity,
               std::span<double> next) const noexcept;

    /// next = 2 cur - prev + step^2/m (k cur_s)_s.
    void advance(std::span<const double> prev, std::span<const double> cur,
                 std::span<double> next) const noexcept;

private:
    std::vector<double> mass_;
    std::vector<double> faces_;
    double step_;
    double inv_spacing_sq_;
};

}  // namespace sidewise
