#include <doctest.h>

#include <cmath>

#include "mopp/criticality.hpp"
#include "mopp/problems.hpp"
#include "oracles.hpp"

using namespace mopp;

namespace {
Point pt(double a, double b) { return (Point(2) << a, b).finished(); }
}  // namespace

TEST_CASE("certificate at critical points of the example") {
    const ProblemSpec p = problems::paper_example();
    const auto c12 = criticality_certificate(jacobian(p, pt(1, 2)), 1e-12);
    CHECK(c12.is_critical);
    CHECK(c12.residual <= 1e-10);
    CHECK(c12.lambda[0] == doctest::Approx(0.0));
    CHECK(c12.lambda[1] == doctest::Approx(1.0));
    CHECK_FALSE(c12.descent.has_value());
    const auto c00 = criticality_certificate(jacobian(p, pt(0, 0)), 1e-12);
    CHECK(c00.is_critical);
    CHECK(c00.residual <= 1e-10);
}

TEST_CASE("certificate with orthogonal gradients") {
    const ProblemSpec p = problems::paper_example();
    const Matrix J = jacobian(p, pt(1, 0));
    const auto c = criticality_certificate(J, 1e-12);
    const double a = 2.0 * std::exp(-1.0);
    CHECK(c.residual == doctest::Approx(a * 4.0 / std::sqrt(a * a + 16.0)).epsilon(1e-10));
    CHECK(c.residual == doctest::Approx(0.7237).epsilon(1e-4));
    CHECK(std::abs(c.residual - oracle::lambda_grid_residual(J, 1e-5)) <= 1e-6);
    REQUIRE(c.descent.has_value());
    for (Eigen::Index i = 0; i < 2; ++i) CHECK(J.row(i).dot(*c.descent) <= -0.9 * c.residual);
}

TEST_CASE("certificate matches a lambda grid on random points") {
    const ProblemSpec p = problems::paper_example();
    for (const Point& x : oracle::uniform_points(50, -3.0, 4.0, 7)) {
        const Matrix J = jacobian(p, x);
        const auto c = criticality_certificate(J, 1e-12);
        CHECK(std::abs(c.residual - oracle::lambda_grid_residual(J, 1e-5)) <= 1e-6);
        CHECK(c.lambda.minCoeff() >= 0.0);
        CHECK(c.lambda.sum() == doctest::Approx(1.0));
        if (c.descent) {
            for (Eigen::Index i = 0; i < 2; ++i) CHECK(J.row(i).dot(*c.descent) <= -0.9 * c.residual);
        }
    }
}

TEST_CASE("normalized residual ignores gradient scale") {
    Matrix J(2, 2);
    J << 1e-9, 1e-9, 3.0, 1.0;
    const auto c = criticality_certificate(J, 1e-6);
    CHECK(c.is_critical);  // the raw residual is tiny
    CHECK(c.normalized_residual > 0.5);
    CHECK(c.relative_residual == doctest::Approx(c.residual / std::sqrt(10.0)));
    Matrix opposite(2, 2);
    opposite << 1e-9, 0.0, -5.0, 0.0;
    CHECK(criticality_certificate(opposite, 1e-6).normalized_residual <= 1e-12);
}

TEST_CASE("more objectives than the lambda grid covers") {
    Matrix J(3, 2);
    J << 1, 0, 0, 1, -1, -1;
    const auto c = criticality_certificate(J, 1e-10);
    CHECK(c.residual <= 1e-8);
    CHECK(c.lambda.sum() == doctest::Approx(1.0));
}

TEST_CASE("certificate rejects bad input") {
    CHECK_THROWS_AS(criticality_certificate(Matrix(0, 2), 1e-6), ContractError);
    Matrix J(1, 1);
    J << std::nan("");
    CHECK_THROWS_AS(criticality_certificate(J, 1e-6), ContractError);
}

TEST_CASE("descent direction") {
    const ProblemSpec p = problems::paper_example();
    const Matrix J = jacobian(p, pt(1, 0));
    const auto v = descent_direction(J, 1.0);
    REQUIRE(v.has_value());
    CHECK(v->cwiseAbs().maxCoeff() == doctest::Approx(1.0));
    CHECK(J.row(0).dot(*v) < 0.0);
    CHECK(J.row(1).dot(*v) < 0.0);
    CHECK_FALSE(descent_direction(jacobian(p, pt(1, 2)), 1.0).has_value());
    Matrix one(1, 2);
    one << 1, 0;
    const auto s = descent_direction(one, 1.0);
    REQUIRE(s.has_value());
    CHECK((*s - pt(-1, 0)).norm() <= 1e-12);
    CHECK_THROWS_AS(descent_direction(one, 0.0), ContractError);
}

TEST_CASE("weak Pareto grid oracle") {
    const ProblemSpec p = problems::paper_example();
    const Box box{{-2, 3}, {-2, 3}};
    CHECK(weak_pareto_grid_oracle(p, box, 0.05, pt(1, 2), 0.0));
    const auto scan = weak_pareto_grid_scan(p, box, 0.05, pt(-1, 3), 0.0);
    CHECK_FALSE(scan.undominated);
    REQUIRE(scan.witness.has_value());
    CHECK(dominates(evaluate(p, *scan.witness), evaluate(p, pt(-1, 3))) == DominanceRelation::strictly_dominates);
    // The witness from the worked example.
    const ObjectiveVector w = evaluate(p, pt(0.5, 1));
    CHECK(w[0] == doctest::Approx(0.7135).epsilon(1e-4));
    CHECK(w[1] == doctest::Approx(1.25));
}

TEST_CASE("grid oracle scans agree across instruction sets") {
    const ProblemSpec p = problems::paper_example();
    const Box box{{-2, 3}, {-2, 3}};
    for (const Point& x : oracle::uniform_points(8, -2.0, 3.0, 4)) {
        const auto a = weak_pareto_grid_scan(p, box, 0.05, x, 0.0, kernels::Isa::scalar);
        const auto b = weak_pareto_grid_scan(p, box, 0.05, x, 0.0, kernels::detect_isa());
        CHECK(a.undominated == b.undominated);
        CHECK(a.points_scanned == b.points_scanned);
        if (a.witness && b.witness) CHECK((*a.witness - *b.witness).norm() == 0.0);
    }
}

TEST_CASE("grid oracle on a one-objective parabola") {
    ProblemSpec p;
    p.name = "parabola";
    p.dimension = 1;
    p.num_objectives = 1;
    p.evaluator = [](const Point& x) { return ObjectiveVector::Constant(1, (x[0] - 0.5) * (x[0] - 0.5)); };
    p.bounds = Box{{-1, 2}};
    CHECK(weak_pareto_grid_oracle(p, {{-1, 2}}, 0.01, Point::Constant(1, 0.5), 0.0));
    CHECK_FALSE(weak_pareto_grid_oracle(p, {{-1, 2}}, 0.01, Point::Constant(1, 1.5), 0.0));
}

TEST_CASE("Pareto grid oracle on the polyhedral example") {
    const ProblemSpec p = problems::polyhedral_convex_example();
    const Box box{{-3, 5}, {-3, 5}};
    CHECK(pareto_grid_oracle(p, box, 0.02, pt(1, 0), 1e-9));
    CHECK_FALSE(pareto_grid_oracle(p, box, 0.02, pt(1, 0.5), 1e-9));
    CHECK_FALSE(pareto_grid_oracle(p, box, 0.02, pt(-1, 0), 1e-9));
}

TEST_CASE("grid oracle limits") {
    ProblemSpec p;
    p.name = "wide";
    p.dimension = 5;
    p.num_objectives = 1;
    p.evaluator = [](const Point& x) { return ObjectiveVector::Constant(1, x.squaredNorm()); };
    const Box box(5, Interval{0, 1});
    CHECK_THROWS_AS(weak_pareto_grid_oracle(p, box, 0.5, Point::Zero(5), 0.0), OracleError);
    const ProblemSpec q = problems::paper_example();
    CHECK_THROWS_AS(weak_pareto_grid_oracle(q, {{-20, 3}, {-2, 3}}, 0.5, pt(0, 0), 0.0), ContractError);
}

TEST_CASE("Fejer check") {
    // Reference iterates of the two-objective example.
    const std::vector<Point> table{pt(-1, 3),           pt(0.17128, 2.41010), pt(0.65440, 2.16217), pt(0.85337, 2.05877),
                                   pt(0.93534, 2.01588), pt(0.96912, 1.99814), pt(0.98305, 1.99080), pt(0.98879, 1.98776),
                                   pt(0.99115, 1.98651), pt(0.99213, 1.98599), pt(0.99253, 1.98578), pt(0.99270, 1.98569),
                                   pt(0.99277, 1.98565)};
    CHECK(fejer_check(table, table.back(), 1e-6));
    const std::vector<Point> up{Point::Constant(1, 0), Point::Constant(1, 2), Point::Constant(1, 1)};
    CHECK_FALSE(fejer_check(up, Point::Constant(1, 0), 0.0));
    CHECK(fejer_check({pt(1, 1), pt(1, 1), pt(1, 1)}, pt(0, 0), 0.0));
    CHECK_THROWS_AS(fejer_check({}, pt(0, 0), 0.0), ContractError);
}
