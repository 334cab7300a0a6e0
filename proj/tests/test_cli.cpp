#include <doctest.h>

#include <cmath>
#include <regex>
#include <sstream>

#include <json.hpp>

#include "mopp/cli_runner.hpp"

using namespace mopp;

namespace {

Point pt(double a, double b) { return (Point(2) << a, b).finished(); }

const char* const example_config = R"(# example run
problem=paper_example
variant=SPP
x0=-1,3
z=1,1      # equal weights
alpha=const:1
step_tol=1e-4
)";

cli::RunSetup example_setup() { return cli::parse_config(cli::parse_settings(example_config)); }

void expect_config_error(const std::string& text, const std::string& key) {
    try {
        cli::parse_config(cli::parse_settings(text));
        FAIL("expected ConfigError for " << key);
    } catch (const ConfigError& e) {
        CHECK(e.key() == key);
    }
}

}  // namespace

TEST_CASE("example config parses to the expected setup") {
    const cli::RunSetup s = example_setup();
    CHECK(s.problem.name == "paper_example");
    CHECK(s.config.variant == Variant::spp);
    CHECK(s.config.start == pt(-1, 3));
    REQUIRE(s.config.weight);
    CHECK(s.config.weight->values().isApprox(pt(1, 1) / std::sqrt(2.0)));
    CHECK(s.config.alpha.kind() == AlphaSchedule::Kind::constant);
    CHECK(s.config.alpha.at(5) == 1.0);
    CHECK(s.config.stop_step_tol == 1e-4);
    CHECK(s.config.mode == ConstraintMode::sublevel);
    CHECK(s.out_dir == ".");
}

TEST_CASE("settings syntax") {
    const auto s = cli::parse_settings("problem=polyhedral  x0=1,2\n# whole line\nvariant=CISPP # trailing\n");
    CHECK(s.size() == 3);
    CHECK(s.at("x0") == "1,2");
    CHECK(s.at("variant") == "CISPP");
    CHECK_THROWS_AS(cli::parse_settings("problem"), ConfigError);
    CHECK_THROWS_AS(cli::parse_settings("colour=red"), ConfigError);
    const auto merged = cli::merge(s, {{"x0", "3,4"}});
    CHECK(merged.at("x0") == "3,4");
    CHECK(merged.at("problem") == "polyhedral");
    CHECK_THROWS_AS(cli::load_settings("/nonexistent/mopp.cfg"), IoError);
}

TEST_CASE("invalid configurations name the offending key") {
    const std::string base = "problem=paper_example x0=-1,3 ";
    expect_config_error(base + "alpha=const:-1", "alpha");
    expect_config_error(base + "alpha=harmonic:0", "alpha");
    expect_config_error(base + "alpha=geometric:1", "alpha");
    expect_config_error(base + "variant=CISPP", "variant");
    expect_config_error(base + "variant=XPP", "variant");
    expect_config_error(base + "step_tol=abc", "step_tol");
    expect_config_error(base + "step_tol=-1e-4", "step_tol");
    expect_config_error(base + "crit_tol=0", "crit_tol");
    expect_config_error(base + "z=1,-1", "z");
    expect_config_error(base + "z=1,1,1", "z");
    expect_config_error(base + "variant=ISPP delta_power=1", "delta_power");
    expect_config_error(base + "max_outer=1.5", "max_outer");
    expect_config_error("x0=-1,3", "problem");
    expect_config_error("problem=paper_example", "x0");
    expect_config_error("problem=paper_example x0=1", "x0");
    expect_config_error("problem=paper_example x0=20,0", "x0");
    expect_config_error("problem=nowhere x0=1,1", "problem");
}

TEST_CASE("alpha forms") {
    const std::string base = "problem=paper_example x0=-1,3 ";
    CHECK(cli::parse_config(cli::parse_settings(base + "alpha=2")).config.alpha.at(3) == 2.0);
    CHECK(cli::parse_config(cli::parse_settings(base + "alpha=harmonic:1")).config.alpha.at(3) == 0.25);
    const auto l = cli::parse_config(cli::parse_settings(base + "alpha=list:1,2,3")).config.alpha;
    CHECK(l.at(1) == 2.0);
    CHECK(l.at(9) == 3.0);
}

TEST_CASE("CISPP defaults to unconstrained steps") {
    const auto s = cli::parse_config(cli::parse_settings("problem=polyhedral variant=CISPP x0=5,4 e0=0"));
    CHECK(s.config.mode == ConstraintMode::unconstrained);
    CHECK(s.config.e_budget.at(0) == 0.0);
}

TEST_CASE("iteration table") {
    const cli::RunSetup s = example_setup();
    const RunReport r = run(s.problem, s.config);
    const std::string csv = cli::iteration_table(r);
    std::istringstream in(csv);
    std::string header;
    std::string row0;
    std::string row1;
    std::getline(in, header);
    std::getline(in, row0);
    std::getline(in, row1);
    CHECK(header == "k,inner_iters,x,step_norm,scalarized,F1,F2");
    CHECK(std::regex_match(row1, std::regex(R"(1,\d+,-?\d+\.\d{5};-?\d+\.\d{5}(,-?\d+\.\d{5}){4})")));
    CHECK(row1.substr(row1.find(',', 2) + 1) == "0.17128;2.41010,1.31144,1.30959,0.99709,0.85496");

    const auto rows = cli::parse_iteration_table(csv);
    REQUIRE(rows.size() == r.records.size());
    // Reference first row: x = (0.17128, 2.41010), step 1.31144, scalarized
    // 1.30959, F = (0.99709, 0.85496).
    const cli::TableRow& t = rows[1];
    CHECK(std::abs(t.x[0] - 0.17128) <= 1e-2);
    CHECK(std::abs(t.x[1] - 2.41010) <= 1e-2);
    CHECK(std::abs(t.step_norm - 1.31144) <= 1e-2);
    CHECK(std::abs(t.scalarized - 1.30959) <= 1e-2);
    CHECK(std::abs(t.f[0] - 0.99709) <= 1e-2);
    CHECK(std::abs(t.f[1] - 0.85496) <= 1e-2);
    for (std::size_t k = 0; k < rows.size(); ++k) {
        CHECK(rows[k].k == k);
        CHECK(std::abs(rows[k].x[0] - r.records[k].x[0]) <= 5e-6);
        CHECK(std::abs(rows[k].scalarized - r.records[k].scalarized) <= 5e-6);
    }

    RunReport single = r;
    single.records.resize(1);
    const std::string one = cli::iteration_table(single);
    CHECK(std::count(one.begin(), one.end(), '\n') == 2);
    CHECK_THROWS_AS(cli::parse_iteration_table("a,b\n1,2\n"), IoError);
}

TEST_CASE("run report json") {
    const cli::RunSetup s = example_setup();
    const RunReport r = run(s.problem, s.config);
    const std::string text = cli::emit_run_report(r);
    const auto j = nlohmann::json::parse(text);
    CHECK(j["schema"] == "mopp.run_report/1");
    CHECK(j["problem"] == "paper_example");
    const std::string term = j["termination"];
    CHECK((term == "step_tol" || term == "critical_point" || term == "max_outer" || term == "inner_failure"));
    CHECK(j["iterations"].size() == r.records.size());
    CHECK(j["outer_iterations"] == r.final_record().k);
    CHECK(j["final_certificate"]["residual"].get<double>() < 1e-2);
    CHECK(j["final_certificate"]["lambda"].size() == 2);
    CHECK(j["config"]["variant"] == "SPP");
    CHECK(text == cli::emit_run_report(run(s.problem, s.config)));
    CHECK(text.find("wall") == std::string::npos);
}

TEST_CASE("weights file") {
    const auto w = cli::parse_weights("1,0\n# comment\n\n3,4\n");
    REQUIRE(w.size() == 2);
    CHECK(w[1].values().isApprox(pt(0.6, 0.8)));
    CHECK_THROWS_AS(cli::parse_weights("# nothing\n"), ConfigError);
    CHECK_THROWS_AS(cli::parse_weights("1,-2\n"), ConfigError);
    CHECK_THROWS_AS(cli::parse_weights("0,0\n"), ConfigError);
    CHECK_THROWS_AS(cli::parse_weights("1,x\n"), ConfigError);
}

TEST_CASE("weight sweep") {
    const cli::RunSetup s = example_setup();
    std::vector<WeightVector> weights;
    for (int d = 0; d <= 90; d += 9) {
        const double t = d * M_PI / 180.0;
        weights.push_back(normalize_weights(pt(std::cos(t) + 1e-3, std::sin(t) + 1e-3)));
    }
    const cli::SweepResult r = cli::sweep_weights(s.problem, weights, s.config);
    REQUIRE(r.entries.size() == 11);
    for (const auto& e : r.entries) {
        REQUIRE(e.ok);
        // Pareto set: the segment from (0, 0) to (1, 2).
        const double t = std::clamp(e.x_final.dot(pt(1, 2)) / 5.0, 0.0, 1.0);
        CHECK((e.x_final - t * pt(1, 2)).norm() <= 2e-2);
    }

    const cli::SweepResult one = cli::sweep_weights(s.problem, {*s.config.weight}, s.config);
    CHECK(one.entries[0].x_final == run(s.problem, s.config).final_record().x);
    CHECK(one.entries[0].kept);

    const cli::SweepResult twice = cli::sweep_weights(s.problem, {weights[3], weights[3]}, s.config);
    CHECK(twice.entries[0].x_final == twice.entries[1].x_final);
    CHECK(twice.entries[0].kept);
    CHECK(twice.entries[1].kept);

    const std::string table = cli::sweep_table(r);
    CHECK(table.rfind("index,z,x_final,F_final,status,kept\n", 0) == 0);
    CHECK(std::count(table.begin(), table.end(), '\n') == 12);
}
