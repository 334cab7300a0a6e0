#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "mopp/model.hpp"

namespace mopp::problems {

/// F1 = 1 - exp(-x1^2 - x2^2), F2 = (x1 - 1)^2 + (x2 - 2)^2 on [-10, 10]^2.
ProblemSpec paper_example();

/// F1 = |x1| + |x2|, F2 = |x1 - 2| + |x2| on [-10, 10]^2. Convex, nonsmooth,
/// with Pareto set {(t, 0) : t in [0, 2]}.
ProblemSpec polyhedral_convex_example();

/// F_i(x) = M_i - prod_j x_j^{a_ij} with M_i the utility at the upper box
/// corner, so 0 <= F on the box. Rows of `exponents` are objectives.
/// Throws ConfigError if the box touches zero or an exponent row is zero.
ProblemSpec cobb_douglas_demand(const Matrix& exponents, const Box& box);

/// Registry names: "paper_example", "polyhedral", "cobb_douglas" (exponents
/// [[0.5, 0.5], [0.25, 0.75]] on [0.1, 2]^2) and "cobb_douglas_1d"
/// (exponents [[0.5], [1]] on [0.1, 2]).
std::vector<std::string> registry_names();
/// Throws ConfigError for an unknown name.
ProblemSpec make_problem(std::string_view name);

struct QuasiconvexityViolation {
    std::size_t objective = 0;
    Point x;
    Point y;
    double t = 0.0;
    double excess = 0.0;  // F_i(tx + (1-t)y) - max(F_i(x), F_i(y))
};

struct NonnegativityViolation {
    std::size_t objective = 0;
    Point x;
    double value = 0.0;
};

struct Diagnostics {
    std::size_t samples = 0;
    std::vector<QuasiconvexityViolation> quasiconvexity;
    std::vector<NonnegativityViolation> nonnegativity;

    bool clean() const noexcept { return quasiconvexity.empty() && nonnegativity.empty(); }
};

/// Samples (x, y, t) uniformly in the bounds and reports quasiconvexity
/// violations above 1e-8 and, when the problem claims 0 <= F, components
/// below -1e-12. Passing is evidence, not proof. Requires bounds.
Diagnostics validate_problem(const ProblemSpec& problem, std::size_t samples, std::uint64_t rng_seed);

}  // namespace mopp::problems
