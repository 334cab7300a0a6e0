#include "mopp/scalarization.hpp"

#include <cmath>

namespace mopp {

WeightVector normalize_weights(const Eigen::VectorXd& w) {
    if (w.size() == 0) throw WeightError("empty weight vector");
    if (!w.allFinite()) throw WeightError("weight vector has non-finite components");
    if ((w.array() < 0.0).any()) throw WeightError("weight vector has a negative component");
    const double norm = w.norm();
    if (norm == 0.0) throw WeightError("weight vector is zero");
    return WeightVector(w / norm);
}

double scalarize(const ObjectiveVector& f, const WeightVector& z) {
    if (f.size() != z.size()) {
        throw ContractError("scalarize: objective has " + std::to_string(f.size()) + " components, weight has " +
                            std::to_string(z.size()));
    }
    double s = 0.0;
    for (Eigen::Index i = 0; i < f.size(); ++i) s += z[i] * f[i];
    return s;
}

std::vector<RepresentationViolation> strict_representation_check(const ProblemSpec& problem,
                                                                 const WeightVector& z,
                                                                 const std::vector<std::pair<Point, Point>>& pairs,
                                                                 double tol) {
    std::vector<RepresentationViolation> violations;
    for (const auto& [x, y] : pairs) {
        const ObjectiveVector fx = evaluate(problem, x);
        const ObjectiveVector fy = evaluate(problem, y);
        const DominanceRelation rel = dominates(fx, fy, 0.0);
        const double lhs = scalarize(fx, z);
        const double rhs = scalarize(fy, z);
        bool bad = false;
        switch (rel) {
            case DominanceRelation::strictly_dominates: bad = !(lhs < rhs - tol); break;
            case DominanceRelation::weakly_dominates:
            case DominanceRelation::equal: bad = lhs > rhs + tol; break;
            case DominanceRelation::incomparable: break;
        }
        if (bad) violations.push_back({x, y, rel, lhs, rhs});
    }
    return violations;
}

}  // namespace mopp
