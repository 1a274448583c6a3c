#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "sidewise/coefficients.hpp"
#include "sidewise/grid.hpp"
#include "sidewise/signal.hpp"

namespace sidewise {

/// Sidewise tracking problem: find u with y_x(L,t) = p(t) on (L*beta, T).
struct SidewiseProblem {
    CoefficientField field;
    Grid1D grid;
    TimeSignal target;        ///< p, sampled on the grid, zero up to the cutoff level
    std::vector<double> y0;   ///< initial displacement, one value per node
    std::vector<double> y1;   ///< initial velocity

    /// Zero initial data; when T > L*beta the target is masked at levels <= cutoff_level.
    static SidewiseProblem with_zero_data(CoefficientField field, const Grid1D& grid,
                                          const TimeSignal& target);

    bool has_initial_data() const noexcept;

    /// Throws MinimalTimeError when T <= L*beta, ContractError on malformed sizes.
    void validate_for_exact_control() const;
};

enum class Preconditioner {
    none,  ///< CG in the plain discrete L^2 geometry
    h1,    ///< (I - d^2/dt^2) on (L*beta, T], zero at the cutoff and natural at T
};

struct HumOptions {
    std::size_t max_iter = 500;
    double tol = 1e-6;
    Preconditioner preconditioner = Preconditioner::none;
};

struct ControlResult {
    TimeSignal control;        ///< u on [0, T]
    TimeSignal achieved_flux;  ///< y_x(L, .) of the re-simulated system
    TimeSignal target;
    std::size_t tracking_level = 0;  ///< tracking is measured on levels > tracking_level
    double tracking_error_l2 = 0.0;  ///< ||y_x(L,.) - p|| / ||p|| on the tracking window
    TimeSignal minimizer_s0;         ///< adjoint boundary datum (HUM only)
    std::vector<double> j_history;
    std::vector<double> residual_history;
    std::size_t iterations = 0;
    bool converged = true;
    std::string message;
};

/// Trapezoidal discrete L^2 pairing over the levels (from_level, M].
double window_pairing(const TimeSignal& f, const TimeSignal& g, std::size_t from_level);
double window_norm(const TimeSignal& f, std::size_t from_level);

/// Trapezoidal discrete L^2 norm over [0, T].
double l2_norm(const TimeSignal& f);

/// psi_x(0, .) of the adjoint solution driven by s (boundary-residual flux).
TimeSignal adjoint_observation(const SidewiseProblem& problem, const TimeSignal& s0);

/// u = -a(0) psi_x(0, .).
TimeSignal control_from_adjoint(const SidewiseProblem& problem, const TimeSignal& s0);

/// y_x(L, .) for zero initial data and left Dirichlet control u.
TimeSignal flux_response(const SidewiseProblem& problem, const TimeSignal& u);

/// J(s0) = 1/2 int_0^T [(a psi_x)(0,t)]^2 dt - a(L) <s0, p>.
double functional_J(const SidewiseProblem& problem, const TimeSignal& s0);

/// Lambda s0: flux at x = L produced by the control -a(0) psi_x(0,.), restricted to
/// (L*beta, T]. Symmetric positive semidefinite in window_pairing.
TimeSignal gramian_apply(const SidewiseProblem& problem, const TimeSignal& s0);

/// Riesz representative a(L) (Lambda s0 - p) of the derivative of J.
TimeSignal gradient_J(const SidewiseProblem& problem, const TimeSignal& s0);

/// Minimizes J by preconditioned conjugate residuals on Lambda s0 = p over the
/// levels (cutoff, M]; the residual ||Lambda s0 - p|| is nonincreasing. Problems
/// with initial data are reduced first; the returned control is valid for the
/// original data. Throws MinimalTimeError when T <= L*beta.
ControlResult minimize_J(const SidewiseProblem& problem, const HumOptions& options = {});

/// Subtracts the free-evolution flux from the target; the result has zero initial data.
SidewiseProblem reduce_initial_data(const SidewiseProblem& problem);

/// Minimizes 1/2 [ ||u||^2 + kappa ||y_x(L,.) - p||^2 ] by CG on the normal equations.
/// The penalty acts on (L*beta, T) when T > L*beta and on (0, T) otherwise.
ControlResult penalized_optimal_control(const SidewiseProblem& problem, double kappa,
                                        const HumOptions& options = {});

}  // namespace sidewise
