#include "mopp/inner_solver.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <optional>

namespace mopp {

std::string_view to_string(ConstraintMode mode) noexcept {
    return mode == ConstraintMode::sublevel ? "sublevel" : "unconstrained";
}

double prox_objective(const ProblemSpec& problem, const Point& x, const Point& x_k, const WeightVector& z,
                      double alpha) {
    return scalarize(evaluate(problem, x), z) + 0.5 * alpha * (x - x_k).squaredNorm();
}

PenaltyValue augmented_objective(const ProblemSpec& problem, const Point& x, const Point& x_k,
                                 const ObjectiveVector& f_k, const WeightVector& z, double alpha, double rho,
                                 const Eigen::VectorXd& lambda, const Eigen::VectorXd& scales) {
    if (!(rho > 0.0)) throw ContractError("penalty parameter must be positive");
    PenaltyValue out;
    out.f = evaluate(problem, x);
    const Matrix J = jacobian(problem, x);
    const Eigen::VectorXd& w = z.values();

    out.phi = scalarize(out.f, z) + 0.5 * alpha * (x - x_k).squaredNorm();
    out.gradient = J.transpose() * w + alpha * (x - x_k);

    const Eigen::Index m = out.f.size();
    out.multipliers = Eigen::VectorXd::Zero(m);
    out.normal = Point::Zero(x.size());
    double penalty = 0.0;
    for (Eigen::Index i = 0; i < m; ++i) {
        const double c = (out.f[i] - f_k[i]) / scales[i];
        const double mu = std::max(0.0, lambda[i] + 2.0 * rho * c);
        penalty += (mu * mu - lambda[i] * lambda[i]) / (4.0 * rho);
        out.multipliers[i] = mu;
        if (mu > 0.0) out.normal += (mu / scales[i]) * J.row(i).transpose();
    }
    out.value = out.phi + penalty;
    out.gradient += out.normal;
    return out;
}

PenaltyValue penalty_objective(const ProblemSpec& problem, const Point& x, const Point& x_k, const WeightVector& z,
                               double alpha, double rho) {
    const auto m = static_cast<Eigen::Index>(problem.num_objectives);
    return augmented_objective(problem, x, x_k, evaluate(problem, x_k), z, alpha, rho, Eigen::VectorXd::Zero(m),
                               Eigen::VectorXd::Ones(m));
}

namespace {

Point project(const Point& x, const std::optional<Box>& box) {
    if (!box) return x;
    Point p = x;
    for (Eigen::Index j = 0; j < p.size(); ++j) {
        const Interval& iv = (*box)[static_cast<std::size_t>(j)];
        p[j] = std::clamp(p[j], iv.lower, iv.upper);
    }
    return p;
}

double projected_residual(const Point& x, const Point& g, const std::optional<Box>& box) {
    return (x - project(x - g, box)).norm();
}

struct Descent {
    Point x;
    double value = 0.0;
    double residual = 0.0;
    std::size_t iterations = 0;
    bool converged = false;
};

// Projected gradient descent with Barzilai-Borwein trial steps and Armijo
// backtracking. `fn(x)` returns {value, gradient}.
template <class Fn>
Descent minimize_projected(Fn&& fn, Point x, const std::optional<Box>& box, double tol, std::size_t budget,
                           const InnerConfig& cfg) {
    auto [f, g] = fn(x);
    Descent out;
    double t = 1.0;
    for (;;) {
        const double r = projected_residual(x, g, box);
        if (r <= tol) {
            out.converged = true;
            out.residual = r;
            break;
        }
        if (out.iterations >= budget) {
            out.residual = r;
            break;
        }
        bool accepted = false;
        Point x_t;
        double f_t = 0.0;
        Point g_t;
        const double slack = 4.0 * std::numeric_limits<double>::epsilon() * (1.0 + std::abs(f));
        for (int tries = 0; tries < 80; ++tries) {
            x_t = project(x - t * g, box);
            const Point step = x_t - x;
            if (step.squaredNorm() == 0.0) break;
            auto [fv, gv] = fn(x_t);
            if (fv <= f + cfg.armijo_c * g.dot(step) + slack) {
                f_t = fv;
                g_t = std::move(gv);
                accepted = true;
                break;
            }
            t *= cfg.backtrack;
        }
        if (!accepted) {
            out.residual = r;
            break;
        }
        const Point s = x_t - x;
        const Point y = g_t - g;
        const double sy = s.dot(y);
        t = sy > 0.0 ? std::clamp(s.squaredNorm() / sy, 1e-12, 1e12) : std::min(2.0 * t, 1e12);
        x = std::move(x_t);
        f = f_t;
        g = std::move(g_t);
        ++out.iterations;
    }
    out.x = std::move(x);
    out.value = f;
    return out;
}

bool nonsmooth(const ProblemSpec& problem) { return !problem.differentiable && !problem.jacobian; }

void check_subproblem_inputs(const ProblemSpec& problem, const Point& x_k, double alpha, ConstraintMode mode) {
    if (nonsmooth(problem) &&
        !(mode == ConstraintMode::unconstrained && problem.convexity_class == ConvexityClass::convex &&
          problem.subgradient)) {
        throw ContractError("problem '" + problem.name +
                            "' is nonsmooth; only convex problems with a subgradient oracle are supported, and "
                            "only in unconstrained mode");
    }
    if (!(alpha > 0.0)) throw ContractError("proximal parameter alpha must be positive");
    if (static_cast<std::size_t>(x_k.size()) != problem.dimension) {
        throw ContractError("subproblem center has the wrong dimension");
    }
    if (!problem.in_bounds(x_k)) throw ContractError("subproblem center lies outside the bounds");
}

}  // namespace

SubproblemSolution try_solve_subproblem(const ProblemSpec& problem, const Point& x_k, const WeightVector& z,
                                        double alpha, ConstraintMode mode, const InnerConfig& cfg) {
    check_subproblem_inputs(problem, x_k, alpha, mode);
    if (static_cast<std::size_t>(z.size()) != problem.num_objectives) {
        throw ContractError("weight vector length does not match the number of objectives");
    }
    if (cfg.rho_schedule.empty()) throw ContractError("empty penalty schedule");

    const auto m = static_cast<Eigen::Index>(problem.num_objectives);
    const ObjectiveVector f_k = evaluate(problem, x_k);
    const double phi_center = scalarize(f_k, z);

    SubproblemSolution sol;

    if (nonsmooth(problem)) {
        try {
            const ProxResult prox = prox_convex(problem, x_k, z, alpha, cfg.inner_tol, cfg);
            sol.x_next = prox.x_next;
            sol.inner_iterations = prox.iterations;
            sol.phi_value = prox_objective(problem, prox.x_next, x_k, z, alpha);
            sol.stationarity_residual = prox.e_norm;
            sol.epsilon_achieved = prox.e_norm;
            sol.feasibility_violation = dominance_violation(evaluate(problem, prox.x_next), f_k);
            sol.converged = true;
        } catch (const InnerSolveError& e) {
            sol.x_next = e.best_iterate();
            sol.phi_value = prox_objective(problem, sol.x_next, x_k, z, alpha);
            sol.stationarity_residual = e.residual();
            sol.epsilon_achieved = e.residual();
            sol.feasibility_violation = dominance_violation(evaluate(problem, sol.x_next), f_k);
        }
        return sol;
    }

    if (mode == ConstraintMode::unconstrained) {
        auto fn = [&](const Point& x) {
            const ObjectiveVector f = evaluate(problem, x);
            const Matrix J = jacobian(problem, x);
            return std::pair<double, Point>{scalarize(f, z) + 0.5 * alpha * (x - x_k).squaredNorm(),
                                            J.transpose() * z.values() + alpha * (x - x_k)};
        };
        Descent d = minimize_projected(fn, x_k, problem.bounds, cfg.inner_tol, cfg.max_iterations, cfg);
        sol.x_next = d.x;
        sol.inner_iterations = d.iterations;
        sol.phi_value = d.value;
        sol.stationarity_residual = d.residual;
        sol.epsilon_achieved = d.residual;
        sol.feasibility_violation = dominance_violation(evaluate(problem, d.x), f_k);
        sol.nu_norm = 0.0;
        sol.converged = d.converged;
        return sol;
    }

    const Matrix J_k = jacobian(problem, x_k);
    Eigen::VectorXd scales(m);
    for (Eigen::Index i = 0; i < m; ++i) scales[i] = std::max(J_k.row(i).norm(), 1e-6);

    Eigen::VectorXd lambda = Eigen::VectorXd::Zero(m);
    std::size_t rho_index = 0;
    double rho = cfg.rho_schedule[0];

    Point x = x_k;
    Point best_feasible = x_k;
    double best_phi = phi_center;
    double last_shift = std::numeric_limits<double>::infinity();
    std::size_t iterations = 0;
    bool converged = false;
    double residual = std::numeric_limits<double>::infinity();
    PenaltyValue at_x;

    for (std::size_t round = 0; round < cfg.max_multiplier_rounds && iterations < cfg.max_iterations; ++round) {
        auto fn = [&](const Point& p) {
            PenaltyValue v = augmented_objective(problem, p, x_k, f_k, z, alpha, rho, lambda, scales);
            return std::pair<double, Point>{v.value, std::move(v.gradient)};
        };
        Descent d = minimize_projected(fn, x, problem.bounds, cfg.inner_tol, cfg.max_iterations - iterations, cfg);
        iterations += d.iterations;
        x = d.x;
        residual = d.residual;
        at_x = augmented_objective(problem, x, x_k, f_k, z, alpha, rho, lambda, scales);

        const double violation = dominance_violation(at_x.f, f_k);
        if (violation <= cfg.feas_tol && at_x.phi < best_phi) {
            best_phi = at_x.phi;
            best_feasible = x;
        }

        // Multiplier shift (mu - lambda) / (2 rho) = max(c, -lambda / (2 rho)),
        // measured back in objective units.
        double shift = 0.0;
        for (Eigen::Index i = 0; i < m; ++i) {
            shift = std::max(shift, std::abs(at_x.multipliers[i] - lambda[i]) / (2.0 * rho) * scales[i]);
        }
        if (d.converged && violation <= cfg.feas_tol && shift <= cfg.feas_tol) {
            converged = true;
            break;
        }
        if (shift > 0.25 * last_shift && rho_index + 1 < cfg.rho_schedule.size()) {
            rho = cfg.rho_schedule[++rho_index];
        }
        last_shift = shift;
        lambda = at_x.multipliers;
    }

    sol.inner_iterations = iterations;
    sol.final_rho = rho;
    if (converged) {
        sol.x_next = x;
        sol.phi_value = at_x.phi;
        sol.stationarity_residual = residual;
        sol.epsilon_achieved = residual;
        sol.nu_norm = at_x.normal.norm();
        sol.feasibility_violation = dominance_violation(at_x.f, f_k);
        sol.converged = true;
        return sol;
    }

    // Pull the last iterate back along the segment from x_k until it is
    // feasible; Omega_k is convex for quasiconvex F, so the feasible part of
    // the segment is an interval containing 0.
    const Point dir = x - x_k;
    auto feasible = [&](double t) {
        return dominance_violation(evaluate(problem, Point(x_k + t * dir)), f_k) <= cfg.feas_tol;
    };
    double lo = 0.0;
    double hi = 1.0;
    if (feasible(1.0)) {
        lo = 1.0;
    } else {
        for (int it = 0; it < 60; ++it) {
            const double mid = 0.5 * (lo + hi);
            (feasible(mid) ? lo : hi) = mid;
        }
    }
    const Point pulled = x_k + lo * dir;
    const double pulled_phi = prox_objective(problem, pulled, x_k, z, alpha);
    if (pulled_phi < best_phi) {
        best_phi = pulled_phi;
        best_feasible = pulled;
    }

    const PenaltyValue at_best = augmented_objective(problem, best_feasible, x_k, f_k, z, alpha, rho, lambda, scales);
    sol.x_next = best_feasible;
    sol.phi_value = at_best.phi;
    sol.stationarity_residual = projected_residual(best_feasible, at_best.gradient, problem.bounds);
    sol.epsilon_achieved = sol.stationarity_residual;
    sol.nu_norm = at_best.normal.norm();
    sol.feasibility_violation = dominance_violation(at_best.f, f_k);
    sol.converged = sol.stationarity_residual <= cfg.inner_tol;
    return sol;
}

SubproblemSolution solve_subproblem(const ProblemSpec& problem, const Point& x_k, const WeightVector& z,
                                    double alpha, ConstraintMode mode, const InnerConfig& cfg) {
    SubproblemSolution sol = try_solve_subproblem(problem, x_k, z, alpha, mode, cfg);
    if (!sol.converged) {
        char buf[160];
        std::snprintf(buf, sizeof buf, "subproblem did not reach the residual target: %.3g > %.3g after %zu steps",
                      sol.stationarity_residual, cfg.inner_tol, sol.inner_iterations);
        throw InnerSolveError(buf, sol.x_next, sol.stationarity_residual);
    }
    return sol;
}

ScalarProx prox_abs_sum_1d(const std::vector<std::pair<double, double>>& weighted_kinks, double center,
                           double alpha) {
    if (!(alpha > 0.0)) throw ContractError("proximal parameter alpha must be positive");
    std::vector<std::pair<double, double>> kinks;  // (position, weight)
    kinks.reserve(weighted_kinks.size());
    for (const auto& [weight, position] : weighted_kinks) {
        if (weight < 0.0) throw ContractError("negative weight in a convex piecewise-linear term");
        if (weight > 0.0) kinks.emplace_back(position, weight);
    }
    std::sort(kinks.begin(), kinks.end());

    double total = 0.0;
    for (const auto& k : kinks) total += k.second;

    auto objective = [&](double x) {
        double v = 0.5 * alpha * (x - center) * (x - center);
        for (const auto& [c, a] : kinks) v += a * std::abs(x - c);
        return v;
    };
    auto distance_to_interval = [](double v, double lo, double hi) {
        return v < lo ? lo - v : (v > hi ? v - hi : 0.0);
    };

    double left_mass = 0.0;  // sum of weights of kinks strictly left of the current piece
    std::optional<ScalarProx> found;
    double best_value = std::numeric_limits<double>::infinity();
    ScalarProx best;
    const std::size_t count = kinks.size();
    for (std::size_t t = 0; t <= count && !found; ++t) {
        // Open piece between kink t-1 and kink t.
        const double slope = left_mass - (total - left_mass);
        const double lower = t == 0 ? -std::numeric_limits<double>::infinity() : kinks[t - 1].first;
        const double upper = t == count ? std::numeric_limits<double>::infinity() : kinks[t].first;
        const double stationary = center - slope / alpha;
        if (stationary > lower && stationary < upper) {
            found = ScalarProx{stationary, std::abs(alpha * (center - stationary) - slope)};
            break;
        }
        if (t == count) break;
        // Kink t: subdifferential of the linear part is [slope, slope + 2 a_t].
        const double c = kinks[t].first;
        const double a = kinks[t].second;
        const double target = alpha * (center - c);
        const double dist = distance_to_interval(target, slope, slope + 2.0 * a);
        if (dist == 0.0) {
            found = ScalarProx{c, 0.0};
            break;
        }
        const double v = objective(c);
        if (v < best_value) {
            best_value = v;
            best = {c, dist};
        }
        left_mass += a;
    }
    if (found) return *found;
    // Rounding pushed the optimum onto a piece boundary; fall back to the best kink.
    return best;
}

ProxResult prox_convex(const ProblemSpec& problem, const Point& x_k, const WeightVector& z, double alpha,
                       double e_budget, const InnerConfig& cfg) {
    if (problem.convexity_class != ConvexityClass::convex) {
        throw ContractError("prox_convex requires a convex problem, '" + problem.name + "' is " +
                            std::string(to_string(problem.convexity_class)));
    }
    if (!problem.subgradient) throw ContractError("prox_convex requires a subgradient oracle");
    if (!(alpha > 0.0)) throw ContractError("proximal parameter alpha must be positive");
    if (static_cast<std::size_t>(x_k.size()) != problem.dimension) {
        throw ContractError("prox center has the wrong dimension");
    }
    if (static_cast<std::size_t>(z.size()) != problem.num_objectives) {
        throw ContractError("weight vector length does not match the number of objectives");
    }

    ProxResult out;
    if (problem.separable) {
        const auto n = static_cast<std::size_t>(problem.dimension);
        std::vector<std::vector<std::pair<double, double>>> per_coordinate(n);
        for (const AbsTerm& term : problem.separable->terms) {
            if (term.coordinate >= n || term.objective >= problem.num_objectives) {
                throw ContractError("separable term indexes outside the problem dimensions");
            }
            per_coordinate[term.coordinate].emplace_back(z[static_cast<Eigen::Index>(term.objective)] * term.weight,
                                                         term.center);
        }
        out.x_next = Point(x_k.size());
        double sq = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            const auto idx = static_cast<Eigen::Index>(j);
            const ScalarProx p = prox_abs_sum_1d(per_coordinate[j], x_k[idx], alpha);
            out.x_next[idx] = p.x;
            sq += p.residual * p.residual;
        }
        out.e_norm = std::sqrt(sq);
        out.exact = true;
        evaluate(problem, out.x_next);
        return out;
    }

    auto residual_at = [&](const Point& x) {
        Point e = alpha * (x - x_k);
        for (std::size_t i = 0; i < problem.num_objectives; ++i) {
            e += z[static_cast<Eigen::Index>(i)] * (*problem.subgradient)(x, i);
        }
        return e;
    };
    auto value_at = [&](const Point& x) { return prox_objective(problem, x, x_k, z, alpha); };

    Point x = x_k;
    Point best = x;
    double best_e = std::numeric_limits<double>::infinity();
    double t = 1.0 / alpha;
    for (std::size_t it = 0; it < cfg.max_iterations; ++it) {
        const Point e = residual_at(x);
        const double e_norm = e.norm();
        if (e_norm < best_e) {
            best_e = e_norm;
            best = x;
        }
        out.iterations = it;
        if (e_norm <= e_budget) break;

        const double fx = value_at(x);
        bool accepted = false;
        double trial = t;
        for (int tries = 0; tries < 60; ++tries) {
            const Point cand = x - trial * e;
            if (value_at(cand) <= fx - cfg.armijo_c * trial * e.squaredNorm()) {
                x = cand;
                accepted = true;
                t = std::min(2.0 * trial, 1.0 / alpha);
                break;
            }
            trial *= cfg.backtrack;
        }
        // Nonsmooth point: fall back to the classic strongly convex step 1/(alpha (it + 1)).
        if (!accepted) x = x - e / (alpha * static_cast<double>(it + 1));
    }
    out.x_next = best;
    out.e_norm = best_e;
    if (best_e > e_budget) {
        char buf[128];
        std::snprintf(buf, sizeof buf, "convex prox residual %.3g above budget %.3g", best_e, e_budget);
        throw InnerSolveError(buf, best, best_e);
    }
    return out;
}

}  // namespace mopp
