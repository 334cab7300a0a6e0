#include "mopp/model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace mopp {

std::string_view to_string(ConvexityClass c) noexcept {
    switch (c) {
        case ConvexityClass::quasiconvex: return "quasiconvex";
        case ConvexityClass::convex: return "convex";
        case ConvexityClass::unknown: return "unknown";
    }
    return "unknown";
}

std::string_view to_string(DominanceRelation r) noexcept {
    switch (r) {
        case DominanceRelation::strictly_dominates: return "strictly_dominates";
        case DominanceRelation::weakly_dominates: return "weakly_dominates";
        case DominanceRelation::equal: return "equal";
        case DominanceRelation::incomparable: return "incomparable";
    }
    return "incomparable";
}

bool ProblemSpec::in_bounds(const Point& x) const {
    if (!bounds) return true;
    for (std::size_t j = 0; j < bounds->size(); ++j) {
        if (!(*bounds)[j].contains(x[static_cast<Eigen::Index>(j)])) return false;
    }
    return true;
}

namespace {

void check_dimension(const ProblemSpec& problem, const Point& x) {
    if (static_cast<std::size_t>(x.size()) != problem.dimension) {
        throw ContractError("point has length " + std::to_string(x.size()) + ", problem '" +
                            problem.name + "' expects " + std::to_string(problem.dimension));
    }
}

ObjectiveVector evaluate_unchecked(const ProblemSpec& problem, const Point& x) {
    ObjectiveVector f = problem.evaluator(x);
    if (static_cast<std::size_t>(f.size()) != problem.num_objectives) {
        throw ContractError("evaluator of '" + problem.name + "' returned " + std::to_string(f.size()) +
                            " components, expected " + std::to_string(problem.num_objectives));
    }
    if (!f.allFinite()) {
        throw EvaluationError("non-finite objective value in '" + problem.name + "'");
    }
    return f;
}

}  // namespace

ObjectiveVector evaluate(const ProblemSpec& problem, const Point& x) {
    check_dimension(problem, x);
    if (!problem.in_bounds(x)) {
        throw EvaluationError("point outside the box bounds of '" + problem.name + "'");
    }
    return evaluate_unchecked(problem, x);
}

Matrix finite_difference_jacobian(const ProblemSpec& problem, const Point& x) {
    check_dimension(problem, x);
    const auto n = static_cast<Eigen::Index>(problem.dimension);
    const auto m = static_cast<Eigen::Index>(problem.num_objectives);
    Matrix J(m, n);
    Point probe = x;
    for (Eigen::Index j = 0; j < n; ++j) {
        const double h = 1e-6 * std::max(1.0, std::abs(x[j]));
        probe[j] = x[j] + h;
        const ObjectiveVector fp = evaluate_unchecked(problem, probe);
        probe[j] = x[j] - h;
        const ObjectiveVector fm = evaluate_unchecked(problem, probe);
        probe[j] = x[j];
        J.col(j) = (fp - fm) / (2.0 * h);
    }
    return J;
}

Matrix jacobian(const ProblemSpec& problem, const Point& x) {
    check_dimension(problem, x);
    if (problem.jacobian) {
        Matrix J = (*problem.jacobian)(x);
        if (static_cast<std::size_t>(J.rows()) != problem.num_objectives ||
            static_cast<std::size_t>(J.cols()) != problem.dimension) {
            throw ContractError("jacobian of '" + problem.name + "' has the wrong shape");
        }
        if (!J.allFinite()) throw EvaluationError("non-finite jacobian entry in '" + problem.name + "'");
        return J;
    }
    if (!problem.differentiable) {
        throw ContractError("problem '" + problem.name + "' is nonsmooth and has no jacobian");
    }
    Matrix J = finite_difference_jacobian(problem, x);
    if (!J.allFinite()) throw EvaluationError("non-finite finite-difference jacobian in '" + problem.name + "'");
    return J;
}

DominanceRelation dominates(const ObjectiveVector& a, const ObjectiveVector& b, double tol) {
    if (a.size() != b.size()) {
        throw ContractError("dominance test on vectors of different length");
    }
    if (tol < 0.0) throw ContractError("dominance tolerance must be nonnegative");
    bool equal = true;
    bool strict = true;
    bool weak = true;
    for (Eigen::Index i = 0; i < a.size(); ++i) {
        equal = equal && std::abs(a[i] - b[i]) <= tol;
        strict = strict && a[i] < b[i] - tol;
        weak = weak && a[i] <= b[i] + tol;
    }
    if (equal) return DominanceRelation::equal;
    if (strict) return DominanceRelation::strictly_dominates;
    if (weak) return DominanceRelation::weakly_dominates;
    return DominanceRelation::incomparable;
}

double dominance_violation(const ObjectiveVector& a, const ObjectiveVector& b) {
    if (a.size() != b.size()) throw ContractError("dominance test on vectors of different length");
    return (a - b).cwiseMax(0.0).maxCoeff();
}

}  // namespace mopp
