#include "mopp/outer_loop.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace mopp {

std::string_view to_string(Variant v) noexcept {
    switch (v) {
        case Variant::spp: return "SPP";
        case Variant::ispp: return "ISPP";
        case Variant::cispp: return "CISPP";
    }
    return "SPP";
}

Variant parse_variant(std::string_view text) {
    if (text == "SPP") return Variant::spp;
    if (text == "ISPP") return Variant::ispp;
    if (text == "CISPP") return Variant::cispp;
    throw ConfigError("variant", "expected SPP, ISPP or CISPP, got '" + std::string(text) + "'");
}

std::string_view to_string(Termination t) noexcept {
    switch (t) {
        case Termination::step_tol: return "step_tol";
        case Termination::critical_point: return "critical_point";
        case Termination::max_outer: return "max_outer";
        case Termination::inner_failure: return "inner_failure";
    }
    return "max_outer";
}

namespace {

std::string format_number(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void require_positive_finite(double v, const char* key) {
    if (!(v > 0.0) || !std::isfinite(v)) throw ConfigError(key, "must be a positive finite number");
}

}  // namespace

AlphaSchedule AlphaSchedule::constant(double alpha) {
    require_positive_finite(alpha, "alpha");
    return AlphaSchedule(Kind::constant, {alpha});
}

AlphaSchedule AlphaSchedule::harmonic(double alpha0) {
    require_positive_finite(alpha0, "alpha");
    return AlphaSchedule(Kind::harmonic, {alpha0});
}

AlphaSchedule AlphaSchedule::list(std::vector<double> values) {
    if (values.empty()) throw ConfigError("alpha", "empty alpha list");
    for (double v : values) require_positive_finite(v, "alpha");
    return AlphaSchedule(Kind::list, std::move(values));
}

double AlphaSchedule::at(std::size_t k) const {
    switch (kind_) {
        case Kind::constant: return values_[0];
        case Kind::harmonic: return values_[0] / static_cast<double>(k + 1);
        case Kind::list: return values_[std::min(k, values_.size() - 1)];
    }
    return values_[0];
}

double AlphaSchedule::sup() const {
    if (kind_ == Kind::list) return *std::max_element(values_.begin(), values_.end());
    return values_[0];
}

std::string AlphaSchedule::describe() const {
    switch (kind_) {
        case Kind::constant: return "const:" + format_number(values_[0]);
        case Kind::harmonic: return "harmonic:" + format_number(values_[0]);
        case Kind::list: {
            std::string s = "list:";
            for (std::size_t i = 0; i < values_.size(); ++i) s += (i ? "," : "") + format_number(values_[i]);
            return s;
        }
    }
    return {};
}

SummableBudget SummableBudget::zero() { return SummableBudget(0.0, 2.0); }

SummableBudget SummableBudget::inverse_power(double scale, double power) {
    if (!(scale >= 0.0) || !std::isfinite(scale)) throw ConfigError("delta0", "budget scale must be >= 0");
    if (!(power > 1.0) || !std::isfinite(power)) {
        throw ConfigError("delta_power", "budget scale/(k+1)^p is not summable for p <= 1");
    }
    return SummableBudget(scale, power);
}

double SummableBudget::at(std::size_t k) const noexcept {
    if (scale_ == 0.0) return 0.0;
    return scale_ / std::pow(static_cast<double>(k + 1), power_);
}

double SummableBudget::partial_sum(std::size_t count) const noexcept {
    double s = 0.0;
    for (std::size_t k = 0; k < count; ++k) s += at(k);
    return s;
}

std::string SummableBudget::describe() const {
    if (scale_ == 0.0) return "zero";
    return format_number(scale_) + "/(k+1)^" + format_number(power_);
}

void SolverConfig::validate(const ProblemSpec& problem) const {
    if (static_cast<std::size_t>(start.size()) != problem.dimension) {
        throw ConfigError("x0", "expected " + std::to_string(problem.dimension) + " coordinates, got " +
                                    std::to_string(start.size()));
    }
    if (!start.allFinite()) throw ConfigError("x0", "non-finite coordinate");
    if (!problem.in_bounds(start)) throw ConfigError("x0", "starting point lies outside the problem bounds");
    if (weight && static_cast<std::size_t>(weight->size()) != problem.num_objectives) {
        throw ConfigError("z", "expected " + std::to_string(problem.num_objectives) + " weights, got " +
                                   std::to_string(weight->size()));
    }
    if (!(stop_step_tol > 0.0)) throw ConfigError("step_tol", "must be positive");
    if (!(stop_criticality_tol > 0.0)) throw ConfigError("crit_tol", "must be positive");
    if (!(inner.inner_tol > 0.0)) throw ConfigError("inner_tol", "must be positive");
    if (!(inner.feas_tol >= 0.0)) throw ConfigError("feas_tol", "must be nonnegative");
    require_positive_finite(alpha_bar, "alpha_bar");
    if (!(alpha.sup() < alpha_bar)) throw ConfigError("alpha", "schedule must stay below alpha_bar");

    switch (variant) {
        case Variant::spp:
        case Variant::ispp:
            if (!problem.differentiable && !problem.jacobian) {
                if (variant == Variant::ispp || problem.convexity_class != ConvexityClass::convex ||
                    mode != ConstraintMode::unconstrained) {
                    throw ConfigError("problem", "nonsmooth problem '" + problem.name +
                                                     "' needs variant CISPP or SPP in unconstrained mode");
                }
            }
            break;
        case Variant::cispp:
            if (problem.convexity_class != ConvexityClass::convex) {
                throw ConfigError("variant", "CISPP needs a convex problem, '" + problem.name + "' is " +
                                                 std::string(to_string(problem.convexity_class)));
            }
            if (!problem.subgradient) throw ConfigError("variant", "CISPP needs a subgradient oracle");
            if (mode != ConstraintMode::unconstrained) throw ConfigError("mode", "CISPP steps are unconstrained");
            if (weight_schedule) throw ConfigError("z", "CISPP uses a fixed weight");
            break;
    }
}

WeightVector SolverConfig::weight_at(std::size_t k, std::size_t num_objectives) const {
    if (weight_schedule) {
        WeightVector z = weight_schedule(k);
        if (static_cast<std::size_t>(z.size()) != num_objectives) {
            throw ContractError("weight schedule returned a vector of the wrong length");
        }
        return z;
    }
    if (weight) return *weight;
    return normalize_weights(Eigen::VectorXd::Ones(static_cast<Eigen::Index>(num_objectives)));
}

std::vector<Point> RunReport::trajectory() const {
    std::vector<Point> xs;
    xs.reserve(records.size());
    for (const auto& r : records) xs.push_back(r.x);
    return xs;
}

std::vector<double> RunReport::delta_partial_sums() const {
    std::vector<double> sums;
    double s = 0.0;
    for (std::size_t k = 1; k < records.size(); ++k) sums.push_back(s += records[k].delta);
    return sums;
}

std::vector<double> RunReport::delta_budget_partial_sums() const {
    std::vector<double> sums;
    double s = 0.0;
    for (std::size_t k = 1; k < records.size(); ++k) sums.push_back(s += config.delta_budget.at(k - 1));
    return sums;
}

std::vector<double> RunReport::e_partial_sums() const {
    std::vector<double> sums;
    double s = 0.0;
    for (std::size_t k = 1; k < records.size(); ++k) sums.push_back(s += records[k].e_norm);
    return sums;
}

Point step_residual(const Point& x_k, const Point& x_next, double alpha) {
    if (x_k.size() != x_next.size()) throw ContractError("step_residual: point lengths differ");
    if (!(alpha > 0.0)) throw ContractError("step_residual: alpha must be positive");
    return alpha * (x_k - x_next);
}

StopDecision check_stop(const IterationRecord& record, const std::optional<CriticalityCertificate>& certificate,
                        const SolverConfig& config) {
    if (certificate && certificate->normalized_residual < config.stop_criticality_tol) {
        return {true, Termination::critical_point};
    }
    if (record.k > 0 && record.step_norm < config.stop_step_tol) return {true, Termination::step_tol};
    return {false, Termination::max_outer};
}

double delta_k(double epsilon, double nu_norm, double alpha) {
    if (!(alpha > 0.0)) throw ContractError("delta_k: alpha must be positive");
    if (epsilon < 0.0 || nu_norm < 0.0) throw ContractError("delta_k: epsilon and nu must be nonnegative");
    return std::max(epsilon / alpha, nu_norm / alpha);
}

namespace {

bool smooth(const ProblemSpec& problem) { return problem.differentiable || problem.jacobian.has_value(); }

Matrix subgradient_rows(const ProblemSpec& problem, const Point& x) {
    Matrix rows(static_cast<Eigen::Index>(problem.num_objectives), x.size());
    for (std::size_t i = 0; i < problem.num_objectives; ++i) {
        rows.row(static_cast<Eigen::Index>(i)) = (*problem.subgradient)(x, i).transpose();
    }
    return rows;
}

CriticalityCertificate certificate_at(const ProblemSpec& problem, const Point& x, double tol) {
    if (smooth(problem)) return criticality_certificate(jacobian(problem, x), tol);
    return criticality_certificate(subgradient_rows(problem, x), tol);
}

struct StepOutcome {
    Point x_next;
    std::size_t inner_iterations = 0;
    double epsilon = 0.0;
    double nu_norm = 0.0;
    double e_norm = 0.0;
    double delta = 0.0;
    double feasibility_violation = 0.0;
    bool ok = true;
    std::string message;
};

using StepFn = std::function<StepOutcome(std::size_t k, const Point& x_k, const WeightVector& z, double alpha)>;

IterationRecord make_record(const ProblemSpec& problem, std::size_t k, const Point& x, const WeightVector& z,
                            double alpha) {
    IterationRecord r;
    r.k = k;
    r.x = x;
    r.f = evaluate(problem, x);
    r.scalarized = scalarize(r.f, z);
    r.alpha = alpha;
    r.residual_g = Point::Zero(x.size());
    return r;
}

RunReport drive(const ProblemSpec& problem, const SolverConfig& config, const StepFn& step) {
    const auto started = std::chrono::steady_clock::now();
    RunReport report;
    report.config = config;
    report.problem_name = problem.name;
    report.certificate_source = smooth(problem) ? "jacobian" : "subgradients";
    const bool certificate_stops = smooth(problem);

    const std::size_t m = problem.num_objectives;
    IterationRecord first = make_record(problem, 0, config.start, config.weight_at(0, m), config.alpha.at(0));
    CriticalityCertificate cert = certificate_at(problem, first.x, config.stop_criticality_tol);
    first.criticality_residual = cert.residual;
    first.criticality_relative = cert.relative_residual;
    first.criticality_normalized = cert.normalized_residual;
    report.records.push_back(std::move(first));

    StopDecision decision =
        check_stop(report.records.back(), certificate_stops ? std::optional(cert) : std::nullopt, config);

    for (std::size_t k = 0; !decision.stop && k < config.max_outer; ++k) {
        const IterationRecord& prev = report.records.back();
        const WeightVector z = config.weight_at(k, m);
        const double alpha = config.alpha.at(k);
        StepOutcome out = step(k, prev.x, z, alpha);
        if (!out.ok) {
            report.termination = Termination::inner_failure;
            report.failure_message = out.message;
            report.final_certificate = cert;
            report.wall_time_seconds =
                std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
            return report;
        }
        IterationRecord rec = make_record(problem, k + 1, out.x_next, config.weight_at(k + 1, m), alpha);
        rec.step_norm = (out.x_next - prev.x).norm();
        rec.residual_g = step_residual(prev.x, out.x_next, alpha);
        rec.residual_g_norm = alpha * rec.step_norm;
        rec.delta = out.delta;
        rec.epsilon = out.epsilon;
        rec.nu_norm = out.nu_norm;
        rec.e_norm = out.e_norm;
        rec.inner_iterations = out.inner_iterations;
        rec.feasibility_violation = out.feasibility_violation;
        cert = certificate_at(problem, rec.x, config.stop_criticality_tol);
        rec.criticality_residual = cert.residual;
        rec.criticality_relative = cert.relative_residual;
        rec.criticality_normalized = cert.normalized_residual;
        report.records.push_back(std::move(rec));
        decision = check_stop(report.records.back(), certificate_stops ? std::optional(cert) : std::nullopt, config);
    }

    report.termination = decision.stop ? decision.reason : Termination::max_outer;
    report.final_certificate = cert;
    report.wall_time_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    return report;
}

StepOutcome from_subproblem(const SubproblemSolution& sol, double alpha) {
    StepOutcome out;
    out.x_next = sol.x_next;
    out.inner_iterations = sol.inner_iterations;
    out.epsilon = sol.epsilon_achieved;
    out.nu_norm = sol.nu_norm;
    out.delta = delta_k(sol.epsilon_achieved, sol.nu_norm, alpha);
    out.feasibility_violation = sol.feasibility_violation;
    return out;
}

void require_variant(const SolverConfig& config, Variant v) {
    if (config.variant != v) {
        throw ContractError("config.variant is " + std::string(to_string(config.variant)) + ", expected " +
                            std::string(to_string(v)));
    }
}

}  // namespace

RunReport run_spp(const ProblemSpec& problem, const SolverConfig& config) {
    require_variant(config, Variant::spp);
    config.validate(problem);

    if (!smooth(problem)) {
        // Nonsmooth convex problem in unconstrained mode: exact convex prox.
        return drive(problem, config, [&](std::size_t, const Point& x_k, const WeightVector& z, double alpha) {
            StepOutcome out;
            try {
                const ProxResult p = prox_convex(problem, x_k, z, alpha, config.inner.inner_tol, config.inner);
                out.x_next = p.x_next;
                out.e_norm = p.e_norm;
                out.epsilon = p.e_norm;
                out.inner_iterations = p.iterations;
            } catch (const InnerSolveError& e) {
                out.ok = false;
                out.message = e.what();
            }
            return out;
        });
    }

    return drive(problem, config, [&](std::size_t, const Point& x_k, const WeightVector& z, double alpha) {
        const SubproblemSolution sol = try_solve_subproblem(problem, x_k, z, alpha, config.mode, config.inner);
        StepOutcome out = from_subproblem(sol, alpha);
        if (!sol.converged) {
            out.ok = false;
            char buf[160];
            std::snprintf(buf, sizeof buf, "subproblem residual %.3g above inner_tol %.3g", sol.stationarity_residual,
                          config.inner.inner_tol);
            out.message = buf;
        }
        return out;
    });
}

RunReport run_ispp(const ProblemSpec& problem, const SolverConfig& config) {
    require_variant(config, Variant::ispp);
    config.validate(problem);

    return drive(problem, config, [&](std::size_t k, const Point& x_k, const WeightVector& z, double alpha) {
        const double budget = config.delta_budget.at(k);
        InnerConfig inner = config.inner;
        // Spend half of the budget on epsilon; never ask for more accuracy
        // than the exact solver's own floor.
        inner.inner_tol = std::max(config.inner.inner_tol, 0.5 * alpha * budget);
        const SubproblemSolution sol = try_solve_subproblem(problem, x_k, z, alpha, config.mode, inner);
        StepOutcome out = from_subproblem(sol, alpha);
        const double floor = config.inner.inner_tol / alpha;
        if (out.delta > budget + floor) throw BudgetError(k, out.delta, budget);
        return out;
    });
}

RunReport run_cispp(const ProblemSpec& problem, const SolverConfig& config) {
    require_variant(config, Variant::cispp);
    config.validate(problem);

    return drive(problem, config, [&](std::size_t k, const Point& x_k, const WeightVector& z, double alpha) {
        const double budget = config.e_budget.at(k);
        StepOutcome out;
        try {
            const ProxResult p = prox_convex(problem, x_k, z, alpha, budget, config.inner);
            out.x_next = p.x_next;
            out.e_norm = p.e_norm;
            out.inner_iterations = p.iterations;
        } catch (const InnerSolveError& e) {
            throw BudgetError(k, e.residual(), budget);
        }
        if (out.e_norm > budget) throw BudgetError(k, out.e_norm, budget);
        return out;
    });
}

RunReport run(const ProblemSpec& problem, const SolverConfig& config) {
    switch (config.variant) {
        case Variant::spp: return run_spp(problem, config);
        case Variant::ispp: return run_ispp(problem, config);
        case Variant::cispp: return run_cispp(problem, config);
    }
    throw ContractError("unknown variant");
}

}  // namespace mopp
