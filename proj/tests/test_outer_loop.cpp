#include <doctest.h>

#include <cmath>

#include "mopp/outer_loop.hpp"
#include "mopp/problems.hpp"

using namespace mopp;

namespace {

Point pt(double a, double b) { return (Point(2) << a, b).finished(); }

SolverConfig golden() {
    SolverConfig c;
    c.variant = Variant::spp;
    c.start = pt(-1, 3);
    c.weight = normalize_weights(pt(1, 1));
    c.alpha = AlphaSchedule::constant(1.0);
    c.stop_step_tol = 1e-4;
    return c;
}

// F = (x^2, (x - 1)^2): smooth and convex, Pareto set [0, 1].
ProblemSpec smooth_pair() {
    ProblemSpec p;
    p.name = "smooth_pair";
    p.dimension = 1;
    p.num_objectives = 2;
    p.evaluator = [](const Point& x) { return (ObjectiveVector(2) << x[0] * x[0], (x[0] - 1) * (x[0] - 1)).finished(); };
    p.jacobian = [](const Point& x) { return (Matrix(2, 1) << 2 * x[0], 2 * (x[0] - 1)).finished(); };
    p.subgradient = [](const Point& x, std::size_t i) { return Point::Constant(1, 2 * (x[0] - static_cast<double>(i))); };
    p.bounds = Box{{-10, 10}};
    p.convexity_class = ConvexityClass::convex;
    p.claims_nonnegative = true;
    return p;
}

}  // namespace

TEST_CASE("example run from (-1, 3)") {
    const RunReport r = run(problems::paper_example(), golden());
    CHECK(r.termination == Termination::step_tol);
    CHECK(r.final_record().k >= 9);
    CHECK(r.final_record().k <= 15);
    CHECK((r.final_record().x - pt(0.99277, 1.98566)).norm() <= 5e-3);
    CHECK((r.records[1].x - pt(0.17128, 2.41010)).cwiseAbs().maxCoeff() <= 1e-2);
    CHECK(r.records[0].k == 0);
    CHECK(r.records[0].step_norm == 0.0);
    for (std::size_t k = 1; k < r.records.size(); ++k) {
        const auto& rec = r.records[k];
        CHECK(rec.feasibility_violation <= 1e-9);
        CHECK(dominance_violation(rec.f, r.records[k - 1].f) <= 1e-9);
        CHECK(rec.scalarized <= r.records[k - 1].scalarized + 1e-12);
        CHECK(rec.residual_g_norm == doctest::Approx(rec.alpha * rec.step_norm));
    }
    CHECK(r.certificate_source == "jacobian");
}

TEST_CASE("a Pareto point stops at once") {
    SolverConfig c = golden();
    c.start = pt(1, 2);
    const RunReport r = run(problems::paper_example(), c);
    CHECK(r.termination == Termination::critical_point);
    CHECK(r.records.size() == 1);
    CHECK(r.final_certificate.is_critical);
}

TEST_CASE("max_outer caps the run") {
    SolverConfig c = golden();
    c.max_outer = 3;
    const RunReport r = run(problems::paper_example(), c);
    CHECK(r.termination == Termination::max_outer);
    CHECK(r.records.size() == 4);
}

TEST_CASE("ISPP with a divergent budget is rejected") {
    CHECK_THROWS_AS(SummableBudget::inverse_power(1.0, 1.0), ConfigError);
    CHECK_THROWS_AS(SummableBudget::inverse_power(-1.0, 2.0), ConfigError);
    CHECK_NOTHROW(SummableBudget::inverse_power(1.0, 1.5));
}

TEST_CASE("ISPP keeps within its budget") {
    SolverConfig c = golden();
    c.variant = Variant::ispp;
    c.delta_budget = SummableBudget::inverse_power(0.1, 2.0);
    const RunReport r = run(problems::paper_example(), c);
    CHECK(r.termination == Termination::step_tol);
    const auto spent = r.delta_partial_sums();
    const auto allowed = r.delta_budget_partial_sums();
    REQUIRE(spent.size() == allowed.size());
    for (std::size_t i = 0; i < spent.size(); ++i) CHECK(spent[i] <= allowed[i] + 1e-9 * static_cast<double>(i + 1));
    CHECK((r.final_record().x - run(problems::paper_example(), golden()).final_record().x).norm() <= 1e-3);
}

TEST_CASE("CISPP on the polyhedral problem") {
    SolverConfig c;
    c.variant = Variant::cispp;
    c.mode = ConstraintMode::unconstrained;
    c.start = pt(5, 4);
    c.e_budget = SummableBudget::zero();
    const RunReport r = run(problems::polyhedral_convex_example(), c);
    CHECK(r.termination == Termination::step_tol);
    CHECK(std::abs(r.final_record().x[1]) <= 1e-12);
    CHECK(r.final_record().x[0] >= 0.0);
    CHECK(r.final_record().x[0] <= 2.0);
    CHECK(r.certificate_source == "subgradients");

    c.start = pt(1, 0);
    const RunReport s = run(problems::polyhedral_convex_example(), c);
    CHECK(s.records.size() == 2);
    CHECK(s.records[1].step_norm == 0.0);
    CHECK(s.final_record().x == pt(1, 0));
}

TEST_CASE("CISPP on a smooth convex problem") {
    SolverConfig c;
    c.variant = Variant::cispp;
    c.mode = ConstraintMode::unconstrained;
    c.start = Point::Constant(1, 4.0);
    c.e_budget = SummableBudget::inverse_power(1e-8, 2.0);
    const RunReport r = run(smooth_pair(), c);
    CHECK(r.termination != Termination::max_outer);
    CHECK(r.final_record().x[0] >= -1e-3);
    CHECK(r.final_record().x[0] <= 1.0 + 1e-3);
}

TEST_CASE("configurations the variants refuse") {
    SolverConfig c = golden();
    c.variant = Variant::cispp;
    c.mode = ConstraintMode::unconstrained;
    CHECK_THROWS_AS(run(problems::paper_example(), c), ConfigError);

    c = golden();
    c.variant = Variant::ispp;
    c.start = pt(1, 1);
    CHECK_THROWS_AS(run(problems::polyhedral_convex_example(), c), ConfigError);

    c = golden();
    c.start = Point::Zero(3);
    CHECK_THROWS_AS(run(problems::paper_example(), c), ConfigError);
}

TEST_CASE("step_residual") {
    const Point g = step_residual(pt(0, 0), pt(0.1, 0.2), 2.0);
    CHECK(g[0] == doctest::Approx(-0.2));
    CHECK(g[1] == doctest::Approx(-0.4));
}

TEST_CASE("check_stop") {
    SolverConfig c = golden();
    IterationRecord rec;
    rec.k = 3;
    rec.step_norm = 5e-5;
    CHECK(check_stop(rec, std::nullopt, c).reason == Termination::step_tol);
    rec.step_norm = 1e-3;
    CHECK_FALSE(check_stop(rec, std::nullopt, c).stop);
    CriticalityCertificate cert;
    cert.normalized_residual = 1e-8;
    cert.residual = 1.0;
    const auto d = check_stop(rec, cert, c);
    CHECK(d.stop);
    CHECK(d.reason == Termination::critical_point);
    rec.k = 0;
    rec.step_norm = 0.0;
    CHECK_FALSE(check_stop(rec, std::nullopt, c).stop);
}

TEST_CASE("delta_k") {
    CHECK(delta_k(0.01, 0.0, 1.0) == doctest::Approx(0.01));
    CHECK(delta_k(0.0, 0.0, 3.0) == 0.0);
    CHECK(delta_k(0.1, 0.4, 2.0) == doctest::Approx(0.2));
    CHECK_THROWS_AS(delta_k(0.1, 0.1, 0.0), ContractError);
    CHECK_THROWS_AS(delta_k(-0.1, 0.1, 1.0), ContractError);
}

TEST_CASE("alpha schedules") {
    CHECK(AlphaSchedule::constant(2.0).at(7) == 2.0);
    CHECK(AlphaSchedule::harmonic(1.0).at(3) == doctest::Approx(0.25));
    CHECK(AlphaSchedule::harmonic(1.0).sup() == 1.0);
    const auto l = AlphaSchedule::list({3.0, 1.0, 2.0});
    CHECK(l.at(1) == 1.0);
    CHECK(l.at(10) == 2.0);
    CHECK(l.sup() == 3.0);
    CHECK_THROWS_AS(AlphaSchedule::constant(-1.0), ConfigError);
    CHECK_THROWS_AS(AlphaSchedule::constant(0.0), ConfigError);
    CHECK_THROWS_AS(AlphaSchedule::list({}), ConfigError);

    SolverConfig c = golden();
    c.alpha = AlphaSchedule::constant(2e3);
    CHECK_THROWS_AS(c.validate(problems::paper_example()), ConfigError);
}

TEST_CASE("summable budgets") {
    const auto b = SummableBudget::inverse_power(0.1, 2.0);
    CHECK(b.at(0) == doctest::Approx(0.1));
    CHECK(b.at(1) == doctest::Approx(0.025));
    CHECK(b.partial_sum(2) == doctest::Approx(0.125));
    CHECK(SummableBudget::zero().at(5) == 0.0);
}

TEST_CASE("runs are deterministic") {
    const RunReport a = run(problems::paper_example(), golden());
    const RunReport b = run(problems::paper_example(), golden());
    REQUIRE(a.records.size() == b.records.size());
    for (std::size_t k = 0; k < a.records.size(); ++k) CHECK(a.records[k].x == b.records[k].x);
}

TEST_CASE("weight schedules") {
    SolverConfig c = golden();
    c.weight_schedule = [](std::size_t k) { return normalize_weights(k % 2 ? pt(1, 2) : pt(2, 1)); };
    const RunReport r = run(problems::paper_example(), c);
    CHECK(r.termination != Termination::inner_failure);
    for (std::size_t k = 1; k < r.records.size(); ++k) {
        CHECK(dominance_violation(r.records[k].f, r.records[k - 1].f) <= 1e-9);
    }
    c.weight_schedule = [](std::size_t) { return normalize_weights(Eigen::VectorXd::Ones(3)); };
    CHECK_THROWS_AS(run(problems::paper_example(), c), ContractError);
}
