#include "mopp/cli_runner.hpp"

#include <algorithm>
#include <cerrno>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "mopp/kernels.hpp"

namespace mopp::cli {

namespace {

using ordered_json = nlohmann::ordered_json;

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split(std::string_view s, char sep) {
    std::vector<std::string> parts;
    std::size_t start = 0;
    for (;;) {
        const auto pos = s.find(sep, start);
        parts.push_back(trim(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return parts;
}

double parse_real(const std::string& key, const std::string& text) {
    const std::string t = trim(text);
    if (t.empty()) throw ConfigError(key, "empty number");
    char* end = nullptr;
    errno = 0;
    const double v = std::strtod(t.c_str(), &end);
    if (end != t.c_str() + t.size() || errno == ERANGE || !std::isfinite(v)) {
        throw ConfigError(key, "malformed number '" + t + "'");
    }
    return v;
}

std::uint64_t parse_count(const std::string& key, const std::string& text) {
    const std::string t = trim(text);
    std::uint64_t v = 0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (t.empty() || ec != std::errc() || ptr != t.data() + t.size()) {
        throw ConfigError(key, "expected a nonnegative integer, got '" + t + "'");
    }
    return v;
}

Eigen::VectorXd parse_vector(const std::string& key, const std::string& text) {
    const auto parts = split(text, ',');
    Eigen::VectorXd v(static_cast<Eigen::Index>(parts.size()));
    for (std::size_t i = 0; i < parts.size(); ++i) v[static_cast<Eigen::Index>(i)] = parse_real(key, parts[i]);
    return v;
}

double nonnegative(const std::string& key, double v) {
    if (v < 0.0) throw ConfigError(key, "must be nonnegative");
    return v;
}

double positive(const std::string& key, double v) {
    if (!(v > 0.0)) throw ConfigError(key, "must be positive");
    return v;
}

AlphaSchedule parse_alpha(const std::string& text) {
    const auto colon = text.find(':');
    if (colon == std::string::npos) return AlphaSchedule::constant(parse_real("alpha", text));
    const std::string kind = text.substr(0, colon);
    const std::string rest = text.substr(colon + 1);
    if (kind == "const") return AlphaSchedule::constant(parse_real("alpha", rest));
    if (kind == "harmonic") return AlphaSchedule::harmonic(parse_real("alpha", rest));
    if (kind == "list") {
        const Eigen::VectorXd v = parse_vector("alpha", rest);
        return AlphaSchedule::list(std::vector<double>(v.data(), v.data() + v.size()));
    }
    throw ConfigError("alpha", "expected const:<a>, harmonic:<a0> or list:<a,b,...>, got '" + text + "'");
}

std::string fixed5(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.5f", v);
    return buf;
}

std::string fixed6(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return buf;
}

template <class Vec, class Fmt>
std::string joined(const Vec& v, Fmt fmt) {
    std::string s;
    for (Eigen::Index i = 0; i < static_cast<Eigen::Index>(v.size()); ++i) {
        if (i) s += ';';
        s += fmt(v[i]);
    }
    return s;
}

ordered_json to_json(const Eigen::VectorXd& v) {
    ordered_json a = ordered_json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
    return a;
}

}  // namespace

const std::vector<std::string>& known_keys() {
    static const std::vector<std::string> keys{
        "problem", "variant",   "x0",       "z",        "alpha",    "alpha_bar", "mode",     "step_tol",
        "crit_tol", "max_outer", "delta0",  "delta_power", "e0",    "inner_tol", "feas_tol", "seed",
        "out_dir"};
    return keys;
}

Settings parse_settings(std::string_view text) {
    Settings s;
    std::istringstream lines{std::string(text)};
    std::string line;
    while (std::getline(lines, line)) {
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        std::istringstream tokens(line);
        std::string token;
        while (tokens >> token) {
            const auto eq = token.find('=');
            if (eq == std::string::npos || eq == 0) throw ConfigError(token, "expected key=value");
            const std::string key = token.substr(0, eq);
            const auto& keys = known_keys();
            if (std::find(keys.begin(), keys.end(), key) == keys.end()) throw ConfigError(key, "unknown key");
            s[key] = token.substr(eq + 1);
        }
    }
    return s;
}

Settings load_settings(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot read config file '" + path.string() + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_settings(buf.str());
}

Settings merge(Settings base, const Settings& overrides) {
    for (const auto& [k, v] : overrides) base[k] = v;
    return base;
}

RunSetup parse_config(const Settings& settings) {
    const auto& keys = known_keys();
    for (const auto& [k, v] : settings) {
        if (std::find(keys.begin(), keys.end(), k) == keys.end()) throw ConfigError(k, "unknown key");
    }
    auto get = [&](const std::string& key) -> const std::string* {
        const auto it = settings.find(key);
        return it == settings.end() ? nullptr : &it->second;
    };

    const std::string* problem_name = get("problem");
    if (!problem_name) throw ConfigError("problem", "required");
    RunSetup setup{problems::make_problem(*problem_name), SolverConfig{}, "."};
    SolverConfig& c = setup.config;

    if (const auto* v = get("variant")) c.variant = parse_variant(*v);
    if (c.variant == Variant::cispp) c.mode = ConstraintMode::unconstrained;
    if (const auto* v = get("mode")) {
        if (*v == "sublevel") c.mode = ConstraintMode::sublevel;
        else if (*v == "unconstrained") c.mode = ConstraintMode::unconstrained;
        else throw ConfigError("mode", "expected sublevel or unconstrained, got '" + *v + "'");
    }

    const std::string* x0 = get("x0");
    if (!x0) throw ConfigError("x0", "required");
    c.start = parse_vector("x0", *x0);
    if (const auto* v = get("z")) {
        try {
            c.weight = normalize_weights(parse_vector("z", *v));
        } catch (const WeightError& e) {
            throw ConfigError("z", e.what());
        }
    }
    if (const auto* v = get("alpha")) c.alpha = parse_alpha(*v);
    if (const auto* v = get("alpha_bar")) c.alpha_bar = positive("alpha_bar", parse_real("alpha_bar", *v));
    if (const auto* v = get("step_tol")) c.stop_step_tol = positive("step_tol", parse_real("step_tol", *v));
    if (const auto* v = get("crit_tol")) c.stop_criticality_tol = positive("crit_tol", parse_real("crit_tol", *v));
    if (const auto* v = get("inner_tol")) c.inner.inner_tol = positive("inner_tol", parse_real("inner_tol", *v));
    if (const auto* v = get("feas_tol")) c.inner.feas_tol = nonnegative("feas_tol", parse_real("feas_tol", *v));
    if (const auto* v = get("max_outer")) c.max_outer = parse_count("max_outer", *v);
    if (const auto* v = get("seed")) c.rng_seed = parse_count("seed", *v);

    const double delta0 = get("delta0") ? nonnegative("delta0", parse_real("delta0", *get("delta0"))) : 0.1;
    const double delta_power = get("delta_power") ? parse_real("delta_power", *get("delta_power")) : 2.0;
    c.delta_budget = delta0 == 0.0 ? SummableBudget::zero() : SummableBudget::inverse_power(delta0, delta_power);
    if (const auto* v = get("e0")) {
        const double e0 = nonnegative("e0", parse_real("e0", *v));
        c.e_budget = e0 == 0.0 ? SummableBudget::zero() : SummableBudget::inverse_power(e0, 2.0);
    }
    if (const auto* v = get("out_dir")) setup.out_dir = *v;

    c.validate(setup.problem);
    return setup;
}

void emit_iteration_table(const RunReport& report, std::ostream& sink) {
    if (report.records.empty()) throw ContractError("emit_iteration_table: empty report");
    sink << "k,inner_iters,x,step_norm,scalarized";
    for (Eigen::Index i = 0; i < report.records.front().f.size(); ++i) sink << ",F" << (i + 1);
    sink << '\n';
    for (const IterationRecord& r : report.records) {
        sink << r.k << ',' << r.inner_iterations << ',' << joined(r.x, fixed5) << ',' << fixed5(r.step_norm) << ','
             << fixed5(r.scalarized);
        for (Eigen::Index i = 0; i < r.f.size(); ++i) sink << ',' << fixed5(r.f[i]);
        sink << '\n';
    }
    if (!sink) throw IoError("failed to write the iteration table");
}

std::string iteration_table(const RunReport& report) {
    std::ostringstream out;
    emit_iteration_table(report, out);
    return out.str();
}

std::vector<TableRow> parse_iteration_table(std::string_view csv) {
    std::vector<TableRow> rows;
    std::istringstream in{std::string(csv)};
    std::string line;
    if (!std::getline(in, line) || line.rfind("k,inner_iters,x,step_norm,scalarized", 0) != 0) {
        throw IoError("not an iteration table");
    }
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto cells = split(line, ',');
        if (cells.size() < 6) throw IoError("short iteration table row");
        TableRow row;
        row.k = parse_count("k", cells[0]);
        row.inner_iterations = parse_count("inner_iters", cells[1]);
        for (const auto& part : split(cells[2], ';')) row.x.push_back(parse_real("x", part));
        row.step_norm = parse_real("step_norm", cells[3]);
        row.scalarized = parse_real("scalarized", cells[4]);
        for (std::size_t i = 5; i < cells.size(); ++i) row.f.push_back(parse_real("F", cells[i]));
        rows.push_back(std::move(row));
    }
    return rows;
}

std::string emit_run_report(const RunReport& report) {
    const SolverConfig& c = report.config;
    ordered_json config;
    config["variant"] = std::string(to_string(c.variant));
    config["x0"] = to_json(c.start);
    if (c.weight_schedule) config["z"] = "callback";
    else if (c.weight) config["z"] = to_json(c.weight->values());
    else config["z"] = "equal";
    config["alpha"] = c.alpha.describe();
    config["alpha_bar"] = c.alpha_bar;
    config["mode"] = std::string(to_string(c.mode));
    config["step_tol"] = c.stop_step_tol;
    config["crit_tol"] = c.stop_criticality_tol;
    config["max_outer"] = c.max_outer;
    config["delta_budget"] = c.delta_budget.describe();
    config["e_budget"] = c.e_budget.describe();
    config["seed"] = c.rng_seed;
    config["inner_tol"] = c.inner.inner_tol;
    config["feas_tol"] = c.inner.feas_tol;

    ordered_json iterations = ordered_json::array();
    for (const IterationRecord& r : report.records) {
        ordered_json j;
        j["k"] = r.k;
        j["x"] = to_json(r.x);
        j["f"] = to_json(r.f);
        j["scalarized"] = r.scalarized;
        j["alpha"] = r.alpha;
        j["step_norm"] = r.step_norm;
        j["residual_g"] = to_json(r.residual_g);
        j["residual_g_norm"] = r.residual_g_norm;
        j["delta"] = r.delta;
        j["epsilon"] = r.epsilon;
        j["nu_norm"] = r.nu_norm;
        j["e_norm"] = r.e_norm;
        j["inner_iterations"] = r.inner_iterations;
        j["feasibility_violation"] = r.feasibility_violation;
        j["criticality_residual"] = r.criticality_residual;
        j["criticality_relative"] = r.criticality_relative;
        j["criticality_normalized"] = r.criticality_normalized;
        iterations.push_back(std::move(j));
    }

    const CriticalityCertificate& cert = report.final_certificate;
    ordered_json certificate;
    certificate["source"] = report.certificate_source;
    certificate["lambda"] = to_json(cert.lambda);
    certificate["residual"] = cert.residual;
    certificate["relative_residual"] = cert.relative_residual;
    certificate["normalized_residual"] = cert.normalized_residual;
    certificate["is_critical"] = cert.is_critical;
    certificate["descent"] = cert.descent ? to_json(*cert.descent) : ordered_json(nullptr);
    certificate["duality_gap"] = cert.duality_gap;
    certificate["iterations"] = cert.iterations;

    ordered_json ledger;
    ledger["delta_partial_sums"] = report.delta_partial_sums();
    ledger["delta_budget_partial_sums"] = report.delta_budget_partial_sums();
    ledger["e_partial_sums"] = report.e_partial_sums();

    ordered_json root;
    root["schema"] = "mopp.run_report/1";
    root["problem"] = report.problem_name;
    root["config"] = std::move(config);
    root["termination"] = std::string(to_string(report.termination));
    root["failure"] = report.failure_message;
    root["outer_iterations"] = report.records.size() - 1;
    root["iterations"] = std::move(iterations);
    root["final_certificate"] = std::move(certificate);
    root["budget_ledger"] = std::move(ledger);
    return root.dump(2) + "\n";
}

SweepResult sweep_weights(const ProblemSpec& problem, const std::vector<WeightVector>& weights,
                          const SolverConfig& base) {
    if (weights.empty()) throw ContractError("sweep_weights: empty weight grid");
    SweepResult result;
    for (const WeightVector& w : weights) {
        SolverConfig cfg = base;
        cfg.weight = w;
        cfg.weight_schedule = nullptr;
        SweepEntry entry{w, false, {}, {}, {}, false};
        try {
            const RunReport report = run(problem, cfg);
            entry.x_final = report.final_record().x;
            entry.f_final = report.final_record().f;
            entry.ok = report.termination != Termination::inner_failure;
            entry.status = entry.ok ? std::string(to_string(report.termination)) : report.failure_message;
        } catch (const Error& e) {
            entry.status = e.what();
        }
        result.entries.push_back(std::move(entry));
    }

    std::vector<std::size_t> ok;
    for (std::size_t i = 0; i < result.entries.size(); ++i) {
        if (result.entries[i].ok) ok.push_back(i);
    }
    const std::size_t m = problem.num_objectives;
    std::vector<double> block(ok.size() * m);
    for (std::size_t p = 0; p < ok.size(); ++p) {
        for (std::size_t i = 0; i < m; ++i) {
            block[i * ok.size() + p] = result.entries[ok[p]].f_final[static_cast<Eigen::Index>(i)];
        }
    }
    for (std::size_t idx : ok) {
        const ObjectiveVector& f = result.entries[idx].f_final;
        result.entries[idx].kept =
            kernels::first_pareto_dominator(block, ok.size(), std::span<const double>(f.data(), m), 0.0) ==
            kernels::npos;
    }
    return result;
}

std::string sweep_table(const SweepResult& result) {
    std::ostringstream out;
    out << "index,z,x_final,F_final,status,kept\n";
    for (std::size_t i = 0; i < result.entries.size(); ++i) {
        const SweepEntry& e = result.entries[i];
        std::string status = e.status;
        std::replace(status.begin(), status.end(), ',', ';');
        out << i << ',' << joined(e.weight.values(), fixed6) << ',' << joined(e.x_final, fixed6) << ','
            << joined(e.f_final, fixed6) << ',' << status << ',' << (e.kept ? 1 : 0) << '\n';
    }
    return out.str();
}

std::vector<WeightVector> parse_weights(std::string_view text) {
    std::vector<WeightVector> weights;
    std::istringstream in{std::string(text)};
    std::string line;
    while (std::getline(in, line)) {
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        if (trim(line).empty()) continue;
        try {
            weights.push_back(normalize_weights(parse_vector("weights", line)));
        } catch (const WeightError& e) {
            throw ConfigError("weights", e.what());
        }
    }
    if (weights.empty()) throw ConfigError("weights", "no weights given");
    return weights;
}

}  // namespace mopp::cli
