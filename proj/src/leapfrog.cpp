#include "sidewise/leapfrog.hpp"

#include "sidewise/coefficients.hpp"
#include "sidewise/errors.hpp"
#include "sidewise/grid.hpp"

namespace sidewise {

LeapfrogKernel::LeapfrogKernel(std::vector<double> mass, std::vector<double> faces, double step,
                               double spacing)
    : mass_(std::move(mass)),
      faces_(std::move(faces)),
      step_(step),
      inv_spacing_sq_(1.0 / (spacing * spacing)) {
    if (mass_.size() < 3 || faces_.size() + 1 != mass_.size())
        throw ContractError("leapfrog kernel: need >= 3 nodes and one face per cell");
}

LeapfrogKernel LeapfrogKernel::for_wave(const CoefficientField& field, const Grid1D& grid) {
    if (field.cells() != grid.cells)
        throw ContractError("leapfrog kernel: coefficient samples do not match the grid");
    std::vector<double> mass(field.rho().begin(), field.rho().end());
    std::vector<double> faces(grid.cells);
    const auto a = field.a();
    for (std::size_t i = 0; i < grid.cells; ++i) faces[i] = 2.0 * a[i] * a[i + 1] / (a[i] + a[i + 1]);
    return {std::move(mass), std::move(faces), grid.dt(), grid.dx()};
}

LeapfrogKernel LeapfrogKernel::unit(std::size_t nodes, double step, double spacing) {
    return {std::vector<double>(nodes, 1.0), std::vector<double>(nodes - 1, 1.0), step, spacing};
}

double LeapfrogKernel::divergence(std::span<const double> v, std::size_t i) const noexcept {
    return inv_spacing_sq_ * (faces_[i] * (v[i + 1] - v[i]) - faces_[i - 1] * (v[i] - v[i - 1]));
}

void LeapfrogKernel::start(std::span<const double> cur, std::span<const double> velocity,
                           std::span<double> next) const noexcept {
    const double half_step_sq = 0.5 * step_ * step_;
    for (std::size_t i = 1; i + 1 < nodes(); ++i)
        next[i] = cur[i] + step_ * velocity[i] + half_step_sq * divergence(cur, i) / mass_[i];
}

void LeapfrogKernel::advance(std::span<const double> prev, std::span<const double> cur,
                             std::span<double> next) const noexcept {
    const double step_sq = step_ * step_;
    for (std::size_t i = 1; i + 1 < nodes(); ++i)
        next[i] = 2.0 * cur[i] - prev[i] + step_sq * divergence(cur, i) / mass_[i];
}

}  // namespace sidewise
