#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

#include "mopp/model.hpp"
#include "mopp/scalarization.hpp"

namespace mopp {

/// Whether the proximal subproblem keeps the sublevel constraint
/// F(x) <= F(x_k) (`sublevel`) or only the box bounds (`unconstrained`).
enum class ConstraintMode { sublevel, unconstrained };

std::string_view to_string(ConstraintMode mode) noexcept;

struct InnerConfig {
    /// Target for the stationarity residual (projected gradient norm of the
    /// augmented Lagrangian, i.e. epsilon_k).
    double inner_tol = 1e-10;
    /// Allowed componentwise excess F_i(x_next) - F_i(x_k).
    double feas_tol = 1e-9;
    /// Total gradient steps per subproblem, summed over multiplier rounds.
    std::size_t max_iterations = 50000;
    /// Thin feasible sets (nearly opposite constraint gradients) leave the
    /// multipliers ill-determined and can take hundreds of rounds.
    std::size_t max_multiplier_rounds = 1000;
    std::vector<double> rho_schedule{10.0, 1e2, 1e3, 1e4};
    double armijo_c = 1e-4;
    double backtrack = 0.5;
};

struct SubproblemSolution {
    Point x_next;
    std::size_t inner_iterations = 0;
    double phi_value = 0.0;
    double stationarity_residual = 0.0;
    double feasibility_violation = 0.0;
    double epsilon_achieved = 0.0;
    /// Norm of the normal-cone term nu_k = sum_i mu_i grad F_i(x_next).
    double nu_norm = 0.0;
    double final_rho = 0.0;
    bool converged = false;
};

struct PenaltyValue {
    double value = 0.0;
    Point gradient;
    /// phi_k(x) without the penalty.
    double phi = 0.0;
    /// Shifted multipliers max(0, lambda_i + 2 rho c_i) for the scaled constraints.
    Eigen::VectorXd multipliers;
    /// sum_i (multipliers_i / scale_i) grad F_i(x).
    Point normal;
    ObjectiveVector f;
};

/// phi_k(x) = <F(x), z> + alpha/2 ||x - x_k||^2.
double prox_objective(const ProblemSpec& problem, const Point& x, const Point& x_k, const WeightVector& z,
                      double alpha);

/// phi_k(x) + rho * sum_i max(0, F_i(x) - F_i(x_k))^2 and its gradient.
PenaltyValue penalty_objective(const ProblemSpec& problem, const Point& x, const Point& x_k, const WeightVector& z,
                               double alpha, double rho);

/// Augmented-Lagrangian form of the sublevel penalty with scaled constraints
/// c_i = (F_i(x) - f_k_i) / scales_i:
///   phi_k(x) + sum_i (max(0, lambda_i + 2 rho c_i)^2 - lambda_i^2) / (4 rho).
/// With lambda = 0 and unit scales it coincides with `penalty_objective`.
PenaltyValue augmented_objective(const ProblemSpec& problem, const Point& x, const Point& x_k,
                                 const ObjectiveVector& f_k, const WeightVector& z, double alpha, double rho,
                                 const Eigen::VectorXd& lambda, const Eigen::VectorXd& scales);

/// Minimizes phi_k over Omega_k = {x : F(x) <= F(x_k)} (or over the box in
/// unconstrained mode) starting from x_k. Never throws on non-convergence:
/// the result carries `converged == false` and the best feasible iterate.
/// Nonsmooth problems are accepted only when convex, with a subgradient
/// oracle, in unconstrained mode; they go through `prox_convex`.
SubproblemSolution try_solve_subproblem(const ProblemSpec& problem, const Point& x_k, const WeightVector& z,
                                        double alpha, ConstraintMode mode, const InnerConfig& cfg);

/// As `try_solve_subproblem`, but throws InnerSolveError when the residual
/// target was not reached.
SubproblemSolution solve_subproblem(const ProblemSpec& problem, const Point& x_k, const WeightVector& z,
                                    double alpha, ConstraintMode mode, const InnerConfig& cfg);

struct ProxResult {
    Point x_next;
    /// Norm of a certified element of the subdifferential of
    /// <F(.), z> + alpha/2 ||. - x_k||^2 at x_next.
    double e_norm = 0.0;
    std::size_t iterations = 0;
    bool exact = false;
};

/// Proximal step for a convex problem. Coordinate-separable piecewise-linear
/// objectives are solved exactly; anything else runs a subgradient loop until
/// the certified residual drops to `e_budget`.
ProxResult prox_convex(const ProblemSpec& problem, const Point& x_k, const WeightVector& z, double alpha,
                       double e_budget, const InnerConfig& cfg = {});

/// Exact minimizer of sum_t a_t |x - c_t| + alpha/2 (x - center)^2 with all
/// a_t >= 0, and the distance from 0 to the subdifferential there.
struct ScalarProx {
    double x = 0.0;
    double residual = 0.0;
};
ScalarProx prox_abs_sum_1d(const std::vector<std::pair<double, double>>& weighted_kinks, double center,
                           double alpha);

}  // namespace mopp
