#ifndef ORTHOLAP_SOLVER_HPP
#define ORTHOLAP_SOLVER_HPP

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "ortholap/energy.hpp"
#include "ortholap/report.hpp"

namespace ortholap {

struct SolveConfig {
    double tol_residual = 1e-11;  ///< sup-norm target for the interior residual
    /// Backward-error target: also converged when the residual sup-norm falls
    /// below tol_relative times the absolute-value assembly scale of the
    /// weak form (the level where round-off dominates). 0 disables.
    double tol_relative = 1e-8;
    int max_newton = 60;
    int max_cg = 20000;
    double armijo_slope = 1e-4;   ///< slope fraction in (0, 1/2]
    double armijo_shrink = 0.5;   ///< backtracking factor in (0, 1)
    double cg_tol = 1e-8;         ///< relative residual for the inner CG solve
};

void validate_config(const SolveConfig& cfg);

struct SolveReport {
    int iterations = 0;
    double final_residual = 0.0;
    double final_energy = 0.0;
    std::vector<double> energy_history;  ///< nonincreasing by construction
    double wall_time_s = 0.0;
    bool converged = false;
    std::string failure_reason;
    int cg_iterations_total = 0;
};

/// Per-level solve statistics and inter-level differences of the
/// eps-continuation ladder.
struct LadderReport {
    std::vector<double> eps;                 ///< strictly decreasing, ratio 1/4
    std::vector<SolveReport> solves;         ///< one per level
    std::vector<double> sup_diffs;           ///< ||u_k - u_{k+1}||_inf over B_{R/2}
    std::vector<double> grad_lp_diffs;       ///< ||grad u_k - grad u_{k+1}||_{L^p(B_R)}
    double R = 0.0;
    bool all_converged = false;
    /// Heuristic Cauchy flag: both difference sequences dropped by >= 1.5x
    /// across the last two levels (or are at round-off). Reported, not proof.
    bool cauchy_converged = false;
};

/// Bilinear (Coons patch) interpolation of the boundary values into the
/// interior; reproduces affine data exactly.
ScalarField boundary_extension(const ScalarField& boundary);

/// Solves the regularized Dirichlet problem on the square by damped Newton
/// minimization of the energy. `boundary` supplies values at grid-boundary
/// nodes; eps must be positive. Inner linear systems use Jacobi-preconditioned
/// conjugate gradients on the hessian action. On non-convergence the best
/// iterate is returned with the failure flagged.
std::pair<ScalarField, SolveReport> solve_dirichlet(const Grid& grid,
                                                    const ScalarField& boundary,
                                                    const EnergyParams& params,
                                                    const SolveConfig& cfg);

/// Called after each ladder level with that level's minimizer.
using LevelObserver =
    std::function<void(int level, double eps, const ScalarField&, const SolveReport&)>;

/// Runs levels solves with eps_k = eps0 * 4^{-k}, warm-starting each level
/// from the previous minimizer, and records consecutive differences over
/// B_{R/2} (sup norm) and B_R (gradient L^p). Requires levels >= 2.
std::pair<ScalarField, LadderReport> epsilon_ladder(const Grid& grid,
                                                    const ScalarField& boundary, double p,
                                                    double eps0, int levels,
                                                    const SolveConfig& cfg, double R,
                                                    const LevelObserver& observe = {});

/// Checks energy(solution) <= energy(competitor) + 1e-10 * |energy(solution)|
/// for every competitor; competitors must share the solution's boundary
/// values. lhs of the report is the worst margin energy(sol) - energy(comp).
EstimateReport minimality_check(const ScalarField& solution,
                                const std::vector<ScalarField>& competitors,
                                const EnergyParams& params);

}  // namespace ortholap

#endif
