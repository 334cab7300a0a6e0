#include "mopp/problems.hpp"

#include <cmath>
#include <random>

namespace mopp::problems {

ProblemSpec paper_example() {
    ProblemSpec p;
    p.name = "paper_example";
    p.dimension = 2;
    p.num_objectives = 2;
    p.evaluator = [](const Point& x) {
        ObjectiveVector f(2);
        f[0] = 1.0 - std::exp(-x[0] * x[0] - x[1] * x[1]);
        f[1] = (x[0] - 1.0) * (x[0] - 1.0) + (x[1] - 2.0) * (x[1] - 2.0);
        return f;
    };
    p.jacobian = [](const Point& x) {
        const double e = std::exp(-x[0] * x[0] - x[1] * x[1]);
        Matrix J(2, 2);
        J << 2.0 * x[0] * e, 2.0 * x[1] * e, 2.0 * (x[0] - 1.0), 2.0 * (x[1] - 2.0);
        return J;
    };
    p.bounds = Box{{-10.0, 10.0}, {-10.0, 10.0}};
    p.convexity_class = ConvexityClass::quasiconvex;
    p.claims_nonnegative = true;
    p.known_pareto_points = {Point::Zero(2), (Point(2) << 1.0, 2.0).finished()};
    return p;
}

ProblemSpec polyhedral_convex_example() {
    SeparablePiecewiseLinear pl;
    pl.terms = {
        {0, 0, 1.0, 0.0},
        {0, 1, 1.0, 0.0},
        {1, 0, 1.0, 2.0},
        {1, 1, 1.0, 0.0},
    };
    pl.offsets = {0.0, 0.0};

    ProblemSpec p;
    p.name = "polyhedral";
    p.dimension = 2;
    p.num_objectives = 2;
    p.evaluator = [pl](const Point& x) {
        ObjectiveVector f(2);
        f << pl.offsets[0], pl.offsets[1];
        for (const AbsTerm& t : pl.terms) {
            f[static_cast<Eigen::Index>(t.objective)] +=
                t.weight * std::abs(x[static_cast<Eigen::Index>(t.coordinate)] - t.center);
        }
        return f;
    };
    p.subgradient = [pl](const Point& x, std::size_t i) {
        Point g = Point::Zero(x.size());
        for (const AbsTerm& t : pl.terms) {
            if (t.objective != i) continue;
            const double d = x[static_cast<Eigen::Index>(t.coordinate)] - t.center;
            g[static_cast<Eigen::Index>(t.coordinate)] += t.weight * static_cast<double>((d > 0.0) - (d < 0.0));
        }
        return g;
    };
    p.separable = pl;
    p.bounds = Box{{-10.0, 10.0}, {-10.0, 10.0}};
    p.convexity_class = ConvexityClass::convex;
    p.differentiable = false;
    p.claims_nonnegative = true;
    // Sampled check of the weak-sharp inequality at xbar = (1, 0) holds for
    // tau < 1 and is tight along the Pareto segment, so 0.5 is recorded.
    p.weak_sharp_tau = 0.5;
    p.known_pareto_points = {(Point(2) << 0.0, 0.0).finished(), (Point(2) << 1.0, 0.0).finished(),
                             (Point(2) << 2.0, 0.0).finished()};
    return p;
}

ProblemSpec cobb_douglas_demand(const Matrix& exponents, const Box& box) {
    const auto m = exponents.rows();
    const auto n = exponents.cols();
    if (m == 0 || n == 0) throw ConfigError("exponents", "empty exponent matrix");
    if (static_cast<Eigen::Index>(box.size()) != n) throw ConfigError("box", "box dimension does not match exponents");
    if ((exponents.array() < 0.0).any()) throw ConfigError("exponents", "exponents must be nonnegative");
    for (Eigen::Index i = 0; i < m; ++i) {
        if (exponents.row(i).isZero(0.0)) throw ConfigError("exponents", "exponent row is zero");
    }
    for (const Interval& iv : box) {
        if (!(iv.lower > 0.0) || !(iv.upper > iv.lower)) {
            throw ConfigError("box", "Cobb-Douglas box must lie strictly inside the positive orthant");
        }
    }

    Point upper(n);
    for (Eigen::Index j = 0; j < n; ++j) upper[j] = box[static_cast<std::size_t>(j)].upper;
    auto utility = [exponents](const Point& x) {
        Eigen::VectorXd mu(exponents.rows());
        for (Eigen::Index i = 0; i < exponents.rows(); ++i) {
            double v = 1.0;
            for (Eigen::Index j = 0; j < exponents.cols(); ++j) v *= std::pow(x[j], exponents(i, j));
            mu[i] = v;
        }
        return mu;
    };
    const Eigen::VectorXd ceiling = utility(upper);

    ProblemSpec p;
    p.name = "cobb_douglas";
    p.dimension = static_cast<std::size_t>(n);
    p.num_objectives = static_cast<std::size_t>(m);
    p.evaluator = [utility, ceiling](const Point& x) { return ObjectiveVector(ceiling - utility(x)); };
    p.jacobian = [utility, exponents](const Point& x) {
        const Eigen::VectorXd mu = utility(x);
        Matrix J(exponents.rows(), exponents.cols());
        for (Eigen::Index i = 0; i < exponents.rows(); ++i) {
            for (Eigen::Index j = 0; j < exponents.cols(); ++j) J(i, j) = -exponents(i, j) * mu[i] / x[j];
        }
        return J;
    };
    p.bounds = box;
    p.convexity_class = ConvexityClass::quasiconvex;
    p.claims_nonnegative = true;
    p.known_pareto_points = {upper};
    return p;
}

std::vector<std::string> registry_names() { return {"paper_example", "polyhedral", "cobb_douglas", "cobb_douglas_1d"}; }

ProblemSpec make_problem(std::string_view name) {
    if (name == "paper_example") return paper_example();
    if (name == "polyhedral") return polyhedral_convex_example();
    if (name == "cobb_douglas") {
        Matrix a(2, 2);
        a << 0.5, 0.5, 0.25, 0.75;
        return cobb_douglas_demand(a, Box{{0.1, 2.0}, {0.1, 2.0}});
    }
    if (name == "cobb_douglas_1d") {
        Matrix a(2, 1);
        a << 0.5, 1.0;
        ProblemSpec p = cobb_douglas_demand(a, Box{{0.1, 2.0}});
        p.name = "cobb_douglas_1d";
        return p;
    }
    throw ConfigError("problem", "unknown problem '" + std::string(name) + "'");
}

Diagnostics validate_problem(const ProblemSpec& problem, std::size_t samples, std::uint64_t rng_seed) {
    if (!problem.bounds) throw ContractError("validate_problem needs box bounds to sample from");
    const Box& box = *problem.bounds;
    const auto n = static_cast<Eigen::Index>(problem.dimension);

    std::mt19937_64 rng(rng_seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    auto draw = [&] {
        Point x(n);
        for (Eigen::Index j = 0; j < n; ++j) {
            const Interval& iv = box[static_cast<std::size_t>(j)];
            x[j] = iv.lower + unit(rng) * iv.width();
        }
        return x;
    };

    Diagnostics diag;
    diag.samples = samples;
    for (std::size_t s = 0; s < samples; ++s) {
        const Point x = draw();
        const Point y = draw();
        const double t = unit(rng);
        const Point mid = t * x + (1.0 - t) * y;
        const ObjectiveVector fx = evaluate(problem, x);
        const ObjectiveVector fy = evaluate(problem, y);
        const ObjectiveVector fm = evaluate(problem, mid);
        for (Eigen::Index i = 0; i < fx.size(); ++i) {
            const double excess = fm[i] - std::max(fx[i], fy[i]);
            if (excess > 1e-8) diag.quasiconvexity.push_back({static_cast<std::size_t>(i), x, y, t, excess});
            if (problem.claims_nonnegative && fx[i] < -1e-12) {
                diag.nonnegativity.push_back({static_cast<std::size_t>(i), x, fx[i]});
            }
        }
    }
    return diag;
}

}  // namespace mopp::problems
