#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mopp/criticality.hpp"
#include "mopp/inner_solver.hpp"
#include "mopp/model.hpp"
#include "mopp/scalarization.hpp"

namespace mopp {

enum class Variant { spp, ispp, cispp };

std::string_view to_string(Variant v) noexcept;
Variant parse_variant(std::string_view text);

/// Proximal parameters alpha_k.
class AlphaSchedule {
public:
    enum class Kind { constant, harmonic, list };

    static AlphaSchedule constant(double alpha);
    /// alpha0 / (k + 1); vanishing, for the weak-Pareto regime.
    static AlphaSchedule harmonic(double alpha0);
    /// Explicit values; the last one is held for k beyond the list.
    static AlphaSchedule list(std::vector<double> values);

    double at(std::size_t k) const;
    /// Largest value the schedule ever takes.
    double sup() const;
    Kind kind() const noexcept { return kind_; }
    const std::vector<double>& parameters() const noexcept { return values_; }
    std::string describe() const;

private:
    AlphaSchedule(Kind kind, std::vector<double> values) : kind_(kind), values_(std::move(values)) {}

    Kind kind_;
    std::vector<double> values_;
};

/// Nonnegative sequence with a finite sum: identically zero or
/// scale / (k + 1)^power with power > 1. Anything else is rejected when
/// constructed, since the inexact variants need a summable budget.
class SummableBudget {
public:
    static SummableBudget zero();
    /// Throws ConfigError when the series would diverge (power <= 1).
    static SummableBudget inverse_power(double scale, double power);

    double at(std::size_t k) const noexcept;
    double partial_sum(std::size_t count) const noexcept;
    double scale() const noexcept { return scale_; }
    double power() const noexcept { return power_; }
    std::string describe() const;

private:
    SummableBudget(double scale, double power) : scale_(scale), power_(power) {}

    double scale_;
    double power_;
};

using WeightSchedule = std::function<WeightVector(std::size_t k)>;

struct SolverConfig {
    Variant variant = Variant::spp;
    Point start;
    /// Constant weight z; equal weights when unset.
    std::optional<WeightVector> weight;
    /// Per-iteration weight hook; overrides `weight` when set (SPP/ISPP only).
    WeightSchedule weight_schedule;
    AlphaSchedule alpha = AlphaSchedule::constant(1.0);
    double alpha_bar = 1e3;
    ConstraintMode mode = ConstraintMode::sublevel;
    double stop_step_tol = 1e-4;
    double stop_criticality_tol = 1e-6;
    std::size_t max_outer = 500;
    SummableBudget delta_budget = SummableBudget::inverse_power(0.1, 2.0);
    SummableBudget e_budget = SummableBudget::inverse_power(1e-8, 2.0);
    std::uint64_t rng_seed = 42;
    InnerConfig inner;

    /// Checks the configuration against a problem; throws ConfigError.
    void validate(const ProblemSpec& problem) const;
    WeightVector weight_at(std::size_t k, std::size_t num_objectives) const;
};

enum class Termination { step_tol, critical_point, max_outer, inner_failure };

std::string_view to_string(Termination t) noexcept;

struct IterationRecord {
    std::size_t k = 0;
    Point x;
    ObjectiveVector f;
    /// <F(x^k), z_k>.
    double scalarized = 0.0;
    /// alpha of the step that produced x^k (alpha_{k-1}); alpha_0 for k = 0.
    double alpha = 0.0;
    double step_norm = 0.0;
    /// g = alpha (x^{k-1} - x^k).
    Point residual_g;
    /// alpha * step_norm.
    double residual_g_norm = 0.0;
    double delta = 0.0;
    double epsilon = 0.0;
    double nu_norm = 0.0;
    double e_norm = 0.0;
    std::size_t inner_iterations = 0;
    double feasibility_violation = 0.0;
    double criticality_residual = 0.0;
    double criticality_relative = 0.0;
    double criticality_normalized = 0.0;
};

struct RunReport {
    std::vector<IterationRecord> records;
    Termination termination = Termination::max_outer;
    CriticalityCertificate final_certificate;
    /// "jacobian" or "subgradients" (nonsmooth problems: indicative only).
    std::string certificate_source = "jacobian";
    SolverConfig config;
    std::string problem_name;
    std::string failure_message;
    double wall_time_seconds = 0.0;

    const IterationRecord& final_record() const { return records.back(); }
    std::vector<Point> trajectory() const;
    /// Partial sums of the recorded delta_k, one per step.
    std::vector<double> delta_partial_sums() const;
    std::vector<double> delta_budget_partial_sums() const;
    std::vector<double> e_partial_sums() const;
};

struct StopDecision {
    bool stop = false;
    Termination reason = Termination::max_outer;
};

/// alpha (x_k - x_next).
Point step_residual(const Point& x_k, const Point& x_next, double alpha);

/// Criticality (normalized residual below stop_criticality_tol) takes
/// precedence over the step test; the step test only
/// applies to records produced by a step (k > 0).
StopDecision check_stop(const IterationRecord& record, const std::optional<CriticalityCertificate>& certificate,
                        const SolverConfig& config);

/// max(epsilon / alpha, nu_norm / alpha).
double delta_k(double epsilon, double nu_norm, double alpha);

/// Exact scalarization proximal point method.
RunReport run_spp(const ProblemSpec& problem, const SolverConfig& config);
/// Inexact variant; throws BudgetError when a step cannot fit delta_budget(k).
RunReport run_ispp(const ProblemSpec& problem, const SolverConfig& config);
/// Convex variant with fixed weight and unconstrained steps; throws
/// BudgetError when a step cannot fit e_budget(k).
RunReport run_cispp(const ProblemSpec& problem, const SolverConfig& config);
/// Dispatches on config.variant.
RunReport run(const ProblemSpec& problem, const SolverConfig& config);

}  // namespace mopp
