#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "sidewise/coefficients.hpp"
#include "sidewise/field.hpp"
#include "sidewise/grid.hpp"
#include "sidewise/signal.hpp"

namespace sidewise {

/// Even extension about t = T: psi(x, T + tau) = psi(x, T - tau) on [0, 2T].
/// Rejects fields whose final data psi(., T), psi_t(., T) exceed tol * max|psi|
/// on interior nodes.
SpaceTimeField extend_parity(const SpaceTimeField& psi, double tol = 1e-6);

/// F(x_i) = 1/2 int [rho psi_t^2 + a psi_x^2](x_i, t) dt over [beta x_i, T' - beta x_i],
/// with the endpoints snapped inward to grid levels. Throws when the interval is empty.
double sidewise_energy(const SpaceTimeField& extended, const CoefficientField& field, std::size_t i);

/// int_0^T psi_x(0, t)^2 dt from an extended field (levels 0..M of the original).
double observed_energy(const SpaceTimeField& extended);

struct EnergyBoundCheck {
    std::vector<double> f_profile;  ///< F(x_i)
    double observed = 0.0;          ///< int_0^T psi_x(0, t)^2 dt
    /// Relative slacks (bound - lhs) / bound; negative means the bound is exceeded.
    double energy_margin = 0.0;    ///< max_i F(x_i) <= a(0) G observed
    double trace_margin = 0.0;     ///< int psi(L)^2 <= a(0) L^2 / min(rho0, a0) G observed
    double velocity_margin = 0.0;  ///< rho(L) int psi_t(L)^2 <= a(0) G observed
};

/// Evaluates the sidewise energy bound and the trace and velocity bounds, where
/// G = exp(TV(rho)/rho0 + TV(a)/a0) and the L-traces are integrated over (L beta, T).
/// A zero field reports zero slack everywhere.
EnergyBoundCheck check_energy_bound(const SpaceTimeField& extended, const CoefficientField& field);

/// (int s0^2 + s0'^2 dt)^{1/2} over the levels [from_level, M]; s0' centered inside
/// and one-sided second order at both ends. Samples at levels < from_level must vanish.
double h1_star_norm(const TimeSignal& s0, std::size_t from_level);

/// Uses the signal's own activity cutoff (level 0 when always active).
double h1_star_norm(const TimeSignal& s0);

/// -int s0'(t) phi(t) q(t) dt over [from_level, M]: the pairing of s0 with d/dt(phi q).
/// Throws unless phi(T) = 0 (relative to max|phi|).
double dual_pairing_factored(const TimeSignal& s0, const TimeSignal& phi, const TimeSignal& q,
                             std::size_t from_level);

/// ||s0||_{H^1_*} / ||psi_x(0, .)||_{L^2(0,T)} for the adjoint state driven by s0.
double empirical_observability_ratio(const CoefficientField& field, const Grid1D& grid,
                                     const TimeSignal& s0);

/// Random admissible adjoint data: truncated Fourier sums on (L beta, T) times a
/// sin^2 window that vanishes at L beta (and at T unless open_end is set).
class AdmissibleSampler {
public:
    AdmissibleSampler(const CoefficientField& field, const Grid1D& grid, std::uint64_t seed,
                      std::size_t modes = 8, bool open_end = false);

    TimeSignal next();

private:
    double uniform();  // in [-1, 1), identical on every platform

    Grid1D grid_;
    std::size_t cut_;
    std::size_t modes_;
    bool open_end_;
    std::uint64_t state_;
};

struct ObservabilityOptions {
    std::size_t samples = 50;
    std::uint64_t seed = 0;
    std::size_t modes = 8;
    double disc_tol = -1.0;  ///< negative means default_disc_tol(cells)
};

/// 0.15 at N = 200, halving with each doubling of N.
double default_disc_tol(std::size_t cells);

struct ObservabilityReport {
    double beta = 0.0;
    double min_time = 0.0;
    double c1_theoretical = 0.0;
    double c2_empirical = 0.0;  ///< max ||psi_x(0,.)|| / ||s0||_{H^1_*}
    double disc_tol = 0.0;
    std::vector<double> ratios;
    std::vector<double> f_profile;  ///< F(x_i) of the first sample
    double bound_margin = 0.0;      ///< worst energy-bound slack over the ensemble
    double trace_margin = 0.0;
    double velocity_margin = 0.0;
    std::size_t ratio_violations = 0;  ///< ratios above C1 (1 + disc_tol)
    std::size_t bound_violations = 0;  ///< samples with any slack below -disc_tol
};

ObservabilityReport observability_report(const CoefficientField& field, const Grid1D& grid,
                                         const ObservabilityOptions& options = {});

}  // namespace sidewise
