#pragma once

#include <filesystem>
#include <map>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "mopp/outer_loop.hpp"
#include "mopp/problems.hpp"

namespace mopp::cli {

/// Flat key=value settings. Later assignments win.
using Settings = std::map<std::string, std::string>;

/// Keys understood by `parse_config`.
const std::vector<std::string>& known_keys();

/// Parses whitespace- or newline-separated `key=value` tokens; `#` starts a
/// comment that runs to the end of the line. Throws ConfigError on a token
/// without '=' or an unknown key.
Settings parse_settings(std::string_view text);

/// Reads and parses a settings file. Throws IoError if it cannot be read.
Settings load_settings(const std::filesystem::path& path);

/// `overrides` replace entries of `base`.
Settings merge(Settings base, const Settings& overrides);

struct RunSetup {
    ProblemSpec problem;
    SolverConfig config;
    std::string out_dir = ".";
};

/// Builds the problem and solver configuration and validates them together.
/// Throws ConfigError naming the offending key.
RunSetup parse_config(const Settings& settings);

/// CSV with header `k,inner_iters,x,step_norm,scalarized,F1,...,Fm`; reals
/// use five decimals and point coordinates are joined by ';'.
void emit_iteration_table(const RunReport& report, std::ostream& sink);
std::string iteration_table(const RunReport& report);

struct TableRow {
    std::size_t k = 0;
    std::size_t inner_iterations = 0;
    std::vector<double> x;
    double step_norm = 0.0;
    double scalarized = 0.0;
    std::vector<double> f;
};

/// Reads back the output of `emit_iteration_table`.
std::vector<TableRow> parse_iteration_table(std::string_view csv);

/// JSON run report with a fixed key order. Wall time is left out so equal
/// runs give byte-identical output.
std::string emit_run_report(const RunReport& report);

struct SweepEntry {
    WeightVector weight;
    bool ok = false;
    std::string status;  // termination name or the error message
    Point x_final;
    ObjectiveVector f_final;
    bool kept = false;
};

struct SweepResult {
    std::vector<SweepEntry> entries;
};

/// One run of `base` per weight from the same start, then a Pareto filter
/// over the successful finals. Failed runs are recorded and skipped.
SweepResult sweep_weights(const ProblemSpec& problem, const std::vector<WeightVector>& weights,
                          const SolverConfig& base);

/// CSV `index,z,x_final,F_final,status,kept`.
std::string sweep_table(const SweepResult& result);

/// One weight per line as comma-separated nonnegative numbers, normalized.
std::vector<WeightVector> parse_weights(std::string_view text);

}  // namespace mopp::cli
