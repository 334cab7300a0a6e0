// mopp: command-line front end for the scalarization proximal point solvers.
//
// Exit codes: 0 success, 1 validation violations or I/O failure,
// 2 configuration error, 3 solver failure.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "mopp/cli_runner.hpp"

namespace fs = std::filesystem;

namespace {

enum Exit { ok = 0, violations = 1, config_error = 2, solver_error = 3 };

void write_file(const fs::path& path, const std::string& text) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    out << text;
    if (!out) throw mopp::IoError("cannot write '" + path.string() + "'");
}

std::string read_file(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw mopp::IoError("cannot read '" + path.string() + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

// Flag overrides beat MOPP_OUT_DIR, which beats the config file.
mopp::cli::Settings resolve_settings(const std::string& config_path, const std::map<std::string, std::string>& flags) {
    mopp::cli::Settings s = mopp::cli::load_settings(config_path);
    if (const char* env = std::getenv("MOPP_OUT_DIR"); env && *env) s["out_dir"] = env;
    return mopp::cli::merge(std::move(s), flags);
}

std::string vec_text(const Eigen::VectorXd& v) {
    std::string s = "(";
    char buf[64];
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        std::snprintf(buf, sizeof buf, i ? ", %.5f" : "%.5f", v[i]);
        s += buf;
    }
    return s + ")";
}

int cmd_run(const std::string& config_path, const std::map<std::string, std::string>& flags) {
    const mopp::cli::RunSetup setup = mopp::cli::parse_config(resolve_settings(config_path, flags));
    const auto t0 = std::chrono::steady_clock::now();
    const mopp::RunReport report = mopp::run(setup.problem, setup.config);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    const fs::path dir(setup.out_dir);
    write_file(dir / "iterations.csv", mopp::cli::iteration_table(report));
    write_file(dir / "report.json", mopp::cli::emit_run_report(report));

    const auto& last = report.final_record();
    std::cout << "problem      " << report.problem_name << '\n'
              << "variant      " << mopp::to_string(setup.config.variant) << '\n'
              << "termination  " << mopp::to_string(report.termination) << '\n'
              << "iterations   " << last.k << '\n'
              << "x            " << vec_text(last.x) << '\n'
              << "F(x)         " << vec_text(last.f) << '\n'
              << "output       " << (dir / "report.json").string() << '\n';
    std::cerr << "wall time " << secs << " s\n";
    if (report.termination == mopp::Termination::inner_failure) {
        std::cerr << "error: " << report.failure_message << '\n';
        return solver_error;
    }
    return ok;
}

int cmd_sweep(const std::string& config_path, const std::string& weights_path,
              const std::map<std::string, std::string>& flags) {
    const mopp::cli::RunSetup setup = mopp::cli::parse_config(resolve_settings(config_path, flags));
    const auto weights = mopp::cli::parse_weights(read_file(weights_path));
    for (const auto& w : weights) {
        if (static_cast<std::size_t>(w.size()) != setup.problem.num_objectives) {
            throw mopp::ConfigError("weights", "weight length does not match the number of objectives");
        }
    }
    const mopp::cli::SweepResult result = mopp::cli::sweep_weights(setup.problem, weights, setup.config);
    const fs::path out = fs::path(setup.out_dir) / "sweep.csv";
    write_file(out, mopp::cli::sweep_table(result));

    std::size_t kept = 0;
    std::size_t failed = 0;
    for (const auto& e : result.entries) {
        kept += e.kept;
        failed += !e.ok;
    }
    std::cout << "runs " << result.entries.size() << ", kept " << kept << ", failed " << failed << '\n'
              << "output " << out.string() << '\n';
    return ok;
}

int cmd_validate(const std::string& name, std::size_t samples, std::uint64_t seed) {
    const mopp::ProblemSpec problem = mopp::problems::make_problem(name);
    const auto diag = mopp::problems::validate_problem(problem, samples, seed);
    std::cout << "problem " << problem.name << ": " << diag.samples << " samples, "
              << diag.quasiconvexity.size() << " quasiconvexity violations, " << diag.nonnegativity.size()
              << " nonnegativity violations\n";
    for (const auto& v : diag.quasiconvexity) {
        std::cout << "  quasiconvexity F" << v.objective + 1 << " x=" << vec_text(v.x) << " y=" << vec_text(v.y)
                  << " t=" << v.t << " excess=" << v.excess << '\n';
    }
    for (const auto& v : diag.nonnegativity) {
        std::cout << "  nonnegativity F" << v.objective + 1 << " x=" << vec_text(v.x) << " value=" << v.value
                  << '\n';
    }
    return diag.clean() ? ok : violations;
}

void add_overrides(CLI::App* cmd, std::map<std::string, std::string>& storage) {
    for (const std::string& key : mopp::cli::known_keys()) {
        cmd->add_option("--" + key, storage[key], "override '" + key + "' from the config file");
    }
}

std::map<std::string, std::string> given(CLI::App* cmd, const std::map<std::string, std::string>& storage) {
    std::map<std::string, std::string> out;
    for (const auto& [key, value] : storage) {
        if (cmd->count("--" + key) > 0) out[key] = value;
    }
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Scalarization proximal point solvers for multiobjective minimization"};
    app.require_subcommand(1);

    std::string config_path;
    std::string weights_path;
    std::string problem_name;
    std::size_t samples = 2000;
    std::uint64_t seed = 42;
    std::map<std::string, std::string> run_flags;
    std::map<std::string, std::string> sweep_flags;

    CLI::App* run = app.add_subcommand("run", "run one solver configuration");
    run->add_option("config", config_path, "key=value config file")->required();
    add_overrides(run, run_flags);

    CLI::App* sweep = app.add_subcommand("sweep", "run a configuration for each weight in a file");
    sweep->add_option("config", config_path, "key=value config file")->required();
    sweep->add_option("--weights", weights_path, "one comma-separated weight per line")->required();
    add_overrides(sweep, sweep_flags);

    CLI::App* validate = app.add_subcommand("validate", "sample-check a registered problem");
    validate->add_option("problem", problem_name, "registered problem name")->required();
    validate->add_option("--samples", samples, "number of sampled (x, y, t) triples");
    validate->add_option("--seed", seed, "random seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? ok : config_error;
    }

    try {
        if (run->parsed()) return cmd_run(config_path, given(run, run_flags));
        if (sweep->parsed()) return cmd_sweep(config_path, weights_path, given(sweep, sweep_flags));
        return cmd_validate(problem_name, samples, seed);
    } catch (const mopp::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return config_error;
    } catch (const mopp::IoError& e) {
        std::cerr << "io error: " << e.what() << '\n';
        return violations;
    } catch (const mopp::Error& e) {
        std::cerr << "solver error: " << e.what() << '\n';
        return solver_error;
    } catch (const std::filesystem::filesystem_error& e) {
        std::cerr << "io error: " << e.what() << '\n';
        return violations;
    }
}
