#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "mopp/errors.hpp"

namespace mopp {

using Point = Eigen::VectorXd;
using ObjectiveVector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

enum class ConvexityClass { quasiconvex, convex, unknown };

std::string_view to_string(ConvexityClass c) noexcept;

/// Closed interval per coordinate.
struct Interval {
    double lower = 0.0;
    double upper = 0.0;

    bool contains(double v) const noexcept { return v >= lower && v <= upper; }
    double width() const noexcept { return upper - lower; }
};

using Box = std::vector<Interval>;

/// One term `weight * |x[coordinate] - center|` of a coordinate-separable
/// piecewise-linear objective component.
struct AbsTerm {
    std::size_t objective = 0;
    std::size_t coordinate = 0;
    double weight = 1.0;
    double center = 0.0;
};

/// F_i(x) = offsets[i] + sum of the AbsTerms with objective == i.
/// Supplying this lets the convex prox be computed exactly.
struct SeparablePiecewiseLinear {
    std::vector<AbsTerm> terms;
    std::vector<double> offsets;
};

using Evaluator = std::function<ObjectiveVector(const Point&)>;
using JacobianFn = std::function<Matrix(const Point&)>;
/// Returns one subgradient of objective `i` at `x`.
using SubgradientFn = std::function<Point(const Point&, std::size_t)>;

/// A vector objective F: R^n -> R^m plus what the solvers need to know about it.
///
/// Instances are immutable values once built; the callables must be pure so a
/// problem can be shared across concurrent runs.
struct ProblemSpec {
    std::string name;
    std::size_t dimension = 0;
    std::size_t num_objectives = 0;
    Evaluator evaluator;
    std::optional<JacobianFn> jacobian;
    std::optional<SubgradientFn> subgradient;
    std::optional<SeparablePiecewiseLinear> separable;
    std::optional<Box> bounds;
    ConvexityClass convexity_class = ConvexityClass::unknown;
    /// False for nonsmooth objectives: finite differences would be meaningless.
    bool differentiable = true;
    /// The problem claims 0 <= F componentwise.
    bool claims_nonnegative = false;
    std::optional<double> weak_sharp_tau;
    std::vector<Point> known_pareto_points;

    bool in_bounds(const Point& x) const;
};

enum class DominanceRelation { strictly_dominates, weakly_dominates, equal, incomparable };

std::string_view to_string(DominanceRelation r) noexcept;

/// F(x). Throws ContractError on a dimension mismatch or out-of-bounds point,
/// EvaluationError if any component is non-finite.
ObjectiveVector evaluate(const ProblemSpec& problem, const Point& x);

/// Central-difference Jacobian with per-coordinate step 1e-6 * max(1, |x_j|).
Matrix finite_difference_jacobian(const ProblemSpec& problem, const Point& x);

/// Row i is grad F_i(x). Uses the analytic Jacobian when present, otherwise
/// central finite differences (only for differentiable problems).
Matrix jacobian(const ProblemSpec& problem, const Point& x);

/// Relation of `a` to `b` under the componentwise order with tolerance `tol`.
/// Equality is tested first, then strict, then weak dominance.
DominanceRelation dominates(const ObjectiveVector& a, const ObjectiveVector& b, double tol = 0.0);

/// max_i max(0, a_i - b_i): how far `a` is from weakly dominating `b`.
double dominance_violation(const ObjectiveVector& a, const ObjectiveVector& b);

}  // namespace mopp
