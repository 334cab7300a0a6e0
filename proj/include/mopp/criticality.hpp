#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "mopp/kernels.hpp"
#include "mopp/model.hpp"

namespace mopp {

/// Pareto-criticality certificate at a point, built from the objective
/// gradients (rows of the Jacobian).
///
/// The point is critical when 0 lies in the convex hull of the gradients, so
/// the certificate stores the simplex weights `lambda` of the minimum-norm
/// hull element d = sum_i lambda_i grad F_i and `residual = ||d||`. When the
/// point is not critical, `descent = -d / ||d||` satisfies
/// <grad F_i, descent> <= -0.9 * residual for every i (the 0.9 absorbs the
/// solver's duality-gap stop at tol^2 / 10).
struct CriticalityCertificate {
    Eigen::VectorXd lambda;
    double residual = 0.0;
    /// residual / max_i ||grad F_i||, or 0 when every gradient vanishes.
    double relative_residual = 0.0;
    /// Residual of the same problem with every gradient scaled to unit
    /// length; 0 when some gradient vanishes. Criticality does not depend on
    /// the gradient scales, so this is the scale-free version of the test.
    double normalized_residual = 0.0;
    std::optional<Point> descent;
    bool is_critical = false;
    double duality_gap = 0.0;
    std::size_t iterations = 0;
};

/// Minimum-norm point of the convex hull of the rows of `J`, by Frank-Wolfe
/// with away steps and exact line search, capped at 10*m*n iterations and
/// stopped once the duality gap falls to tol^2 / 10. Ties between vertices
/// go to the lowest index.
CriticalityCertificate criticality_certificate(const Matrix& J, double tol);

/// A common descent direction scaled so ||v||_inf == v_cap, or nullopt when
/// the rows of `J` certify criticality at tolerance `tol`.
std::optional<Point> descent_direction(const Matrix& J, double v_cap, double tol = 1e-12);

struct GridOracleResult {
    /// No scanned point passed the dominance test.
    bool undominated = true;
    std::optional<Point> witness;
    std::size_t points_scanned = 0;
};

/// Exhaustive scan of a regular grid over `box` for a point whose objective
/// vector is better than F(x_star) by more than `tol` in every component.
/// Throws OracleError for n > 4.
GridOracleResult weak_pareto_grid_scan(const ProblemSpec& problem, const Box& box, double resolution,
                                       const Point& x_star, double tol,
                                       kernels::Isa isa = kernels::detect_isa());

/// As `weak_pareto_grid_scan`, looking for a Pareto dominator instead:
/// every component <= F_i(x_star) + tol and one component < F_i(x_star) - tol.
GridOracleResult pareto_grid_scan(const ProblemSpec& problem, const Box& box, double resolution,
                                  const Point& x_star, double tol, kernels::Isa isa = kernels::detect_isa());

/// True when no grid point strictly dominates F(x_star) by more than `tol`.
bool weak_pareto_grid_oracle(const ProblemSpec& problem, const Box& box, double resolution, const Point& x_star,
                             double tol);
/// True when no grid point Pareto-dominates F(x_star) (see `pareto_grid_scan`).
bool pareto_grid_oracle(const ProblemSpec& problem, const Box& box, double resolution, const Point& x_star,
                        double tol);

/// True iff ||x^{k+1} - anchor|| <= ||x^k - anchor|| + slack along the whole trajectory.
bool fejer_check(const std::vector<Point>& trajectory, const Point& anchor, double slack);

}  // namespace mopp
