#pragma once

#include <cstddef>
#include <functional>

#include "sidewise/coefficients.hpp"
#include "sidewise/field.hpp"
#include "sidewise/grid.hpp"
#include "sidewise/hum_control.hpp"
#include "sidewise/signal.hpp"

// Constructive control for the unit-speed string (rho = a = 1): a forward solve on
// [0, L]^2 driven by an artificial left datum f, a C^1 splice of its flux trace
// with the target q, and a march of y_xx = y_tt from x = L towards x = 0.
namespace sidewise {

struct SpliceSpec {
    double length = 1.0;
    double t_bar = 1.2;    ///< tracking starts here; must exceed L
    double horizon = 2.5;  ///< T > t_bar
    TimeSignal q;          ///< target flux on [t_bar, T]
    TimeSignal f;          ///< left datum on [0, L]; empty means f = 0

    /// Throws ContractError unless L < t_bar < T and q covers [t_bar, T].
    void validate() const;
};

/// Checks f(0) = f'(0) = f''(0) = 0 with one-sided differences, relative to max|f|.
/// Throws ContractError on violation; an empty or zero f passes.
void check_compatibility(const TimeSignal& f);

/// alpha(t) = y_x(L, t) on [0, L] for zero initial data, y(0, .) = f, y(L, .) = 0.
/// `grid` must have length L and horizon L.
TimeSignal step1_flux_trace(const SpliceSpec& spec, const Grid1D& grid);

/// Forward field of the step-1 problem on `grid` (same contract as step1_flux_trace).
SpaceTimeField step1_field(const SpliceSpec& spec, const Grid1D& grid);

/// Cubic Hermite interpolant on [t_left, t_right].
class HermiteCubic {
public:
    HermiteCubic(double v_left, double d_left, double v_right, double d_right, double t_left,
                 double t_right);

    double value(double t) const noexcept;
    double derivative(double t) const noexcept;
    double t_left() const noexcept { return t0_; }
    double t_right() const noexcept { return t1_; }

private:
    double t0_, t1_, v0_, d0_, v1_, d1_;
};

HermiteCubic hermite_bridge(double v_left, double d_left, double v_right, double d_right,
                            double t_left, double t_right);

/// c = alpha on [0, L], the Hermite bridge on [L, t_bar], q on [t_bar, T].
/// Junction slopes are one-sided second-order differences of alpha and q.
class SplicedProfile {
public:
    SplicedProfile(TimeSignal alpha, TimeSignal q, const SpliceSpec& spec);

    double operator()(double t) const noexcept;
    const HermiteCubic& bridge() const noexcept { return bridge_; }
    /// Samples on the time levels of `grid`.
    TimeSignal sample(const Grid1D& grid) const;

private:
    TimeSignal alpha_;
    TimeSignal q_;
    double length_;
    double t_bar_;
    HermiteCubic bridge_;
};

SplicedProfile splice_profile(const TimeSignal& alpha, const TimeSignal& q, const SpliceSpec& spec);

/// Space profile prescribed at t = T during the leftward march.
using SpaceProfile = std::function<double(double)>;

/// phi(x) = c(T) (x - L): satisfies phi(L) = 0, phi'(L) = c(T), phi''(L) = 0.
SpaceProfile default_phi(const TimeSignal& c, double length);

/// Marches y_xx = y_tt from x = L to x = 0 with y(L, .) = 0, y_x(L, .) = c,
/// y(., 0) = 0 and y(., T) = phi. The lattice is `grid` read with x as the
/// evolution variable: it requires dx <= cfl_safety * dt (CflError otherwise)
/// and c sampled on its time levels. Throws ContractError for incompatible phi.
SpaceTimeField leftward_solve(const TimeSignal& c, const SpaceProfile& phi, const Grid1D& grid);

/// Sup of |A - B| over the triangle {0 <= t <= x}, evaluated at the time levels of A
/// with B interpolated linearly in time. Both fields must share L and N.
double verify_onesided_uniqueness(const SpaceTimeField& a, const SpaceTimeField& b);

struct CharacteristicsOptions {
    std::size_t cells = 400;
    double cfl_safety = 0.9;
    double tracking_tol = 1e-2;
    SpaceProfile phi;  ///< empty means default_phi
};

struct CharacteristicsResult {
    ControlResult control;   ///< v = y(0, .) on the forward grid and its re-simulation
    TimeSignal alpha;        ///< step-1 flux trace on [0, L]
    TimeSignal profile;      ///< spliced c on the march lattice
    SpaceTimeField leftward;
    double step3_residual = 0.0;  ///< max_x |y_t(x, 0)| of the leftward field
    double triangle_gap = 0.0;    ///< verify_onesided_uniqueness(step-1 field, leftward field)
};

/// Full three-step construction. Requires rho = a = 1 on `field` (ContractError
/// otherwise). The result is flagged (converged = false) when the re-simulated
/// tracking error on [t_bar, T] exceeds options.tracking_tol.
CharacteristicsResult build_control(const SpliceSpec& spec, const CoefficientField& field,
                                    const CharacteristicsOptions& options = {});

}  // namespace sidewise
