#pragma once

#include <utility>
#include <vector>

#include "mopp/model.hpp"

namespace mopp {

/// Nonnegative, nonzero weight of unit Euclidean norm. Only
/// `normalize_weights` constructs one, so every instance satisfies the
/// invariants.
class WeightVector {
public:
    const Eigen::VectorXd& values() const noexcept { return z_; }
    Eigen::Index size() const noexcept { return z_.size(); }
    double operator[](Eigen::Index i) const { return z_[i]; }

    friend bool operator==(const WeightVector& a, const WeightVector& b) { return a.z_ == b.z_; }

private:
    explicit WeightVector(Eigen::VectorXd z) : z_(std::move(z)) {}
    friend WeightVector normalize_weights(const Eigen::VectorXd& w);

    Eigen::VectorXd z_;
};

/// w / ||w||. Throws WeightError for negative, non-finite, or all-zero input.
WeightVector normalize_weights(const Eigen::VectorXd& w);

/// <f, z>.
double scalarize(const ObjectiveVector& f, const WeightVector& z);

struct RepresentationViolation {
    Point x;
    Point y;
    DominanceRelation relation;
    double lhs = 0.0;  // <F(x), z>
    double rhs = 0.0;  // <F(y), z>
};

/// Checks that <F(.), z> preserves the order on the given pairs: F(x) weakly
/// dominating F(y) must give <F(x),z> <= <F(y),z> + tol, and strict dominance
/// must give <F(x),z> < <F(y),z> - tol. Returns the violating pairs.
std::vector<RepresentationViolation> strict_representation_check(const ProblemSpec& problem,
                                                                 const WeightVector& z,
                                                                 const std::vector<std::pair<Point, Point>>& pairs,
                                                                 double tol = 0.0);

}  // namespace mopp
