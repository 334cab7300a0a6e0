#include "mopp/criticality.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace mopp {

namespace {

struct MinNormSolve {
    Eigen::VectorXd lambda;
    double gap = 0.0;
    std::size_t iterations = 0;
};

MinNormSolve min_norm_weights(const Matrix& J, double tol) {
    const Eigen::Index m = J.rows();
    const Matrix Q = J * J.transpose();
    const double gap_tol = tol * tol / 10.0;
    const std::size_t cap = 10 * static_cast<std::size_t>(m) * static_cast<std::size_t>(J.cols());

    Eigen::Index start = 0;
    for (Eigen::Index i = 1; i < m; ++i) {
        if (Q(i, i) < Q(start, start)) start = i;
    }
    Eigen::VectorXd lambda = Eigen::VectorXd::Zero(m);
    lambda[start] = 1.0;

    double gap = 0.0;
    std::size_t it = 0;
    for (;; ++it) {
        const Eigen::VectorXd grad = Q * lambda;
        const double current = lambda.dot(grad);

        Eigen::Index s = 0;
        for (Eigen::Index i = 1; i < m; ++i) {
            if (grad[i] < grad[s]) s = i;
        }
        gap = current - grad[s];
        if (gap <= gap_tol || it >= cap) break;

        Eigen::Index a = -1;
        for (Eigen::Index i = 0; i < m; ++i) {
            if (lambda[i] > 0.0 && (a < 0 || grad[i] > grad[a])) a = i;
        }
        const double away_gap = grad[a] - current;

        Eigen::VectorXd dir = -lambda;
        double step_max = 1.0;
        if (gap >= away_gap) {
            dir[s] += 1.0;
        } else {
            dir = lambda;
            dir[a] -= 1.0;
            step_max = lambda[a] / (1.0 - lambda[a]);
        }
        const double slope = grad.dot(dir);
        const double curvature = dir.dot(Q * dir);
        double step = curvature > 0.0 ? -slope / curvature : step_max;
        step = std::clamp(step, 0.0, step_max);
        if (step == 0.0) break;

        lambda += step * dir;
        lambda = lambda.cwiseMax(0.0);
        lambda /= lambda.sum();
    }
    return {lambda, std::max(gap, 0.0), it};
}

}  // namespace

CriticalityCertificate criticality_certificate(const Matrix& J, double tol) {
    if (J.rows() == 0 || J.cols() == 0) throw ContractError("criticality_certificate: empty jacobian");
    if (!J.allFinite()) throw ContractError("criticality_certificate: non-finite jacobian");
    if (tol < 0.0) throw ContractError("criticality_certificate: negative tolerance");

    const MinNormSolve solve = min_norm_weights(J, tol);
    const Point d = J.transpose() * solve.lambda;

    CriticalityCertificate cert;
    cert.lambda = solve.lambda;
    cert.residual = d.norm();
    cert.duality_gap = solve.gap;
    cert.iterations = solve.iterations;
    cert.is_critical = cert.residual < tol;
    if (!cert.is_critical) cert.descent = Point(-d / cert.residual);

    const Eigen::VectorXd norms = J.rowwise().norm();
    cert.relative_residual = norms.maxCoeff() > 0.0 ? cert.residual / norms.maxCoeff() : 0.0;
    if (norms.minCoeff() > 0.0) {
        const Matrix unit = norms.cwiseInverse().asDiagonal() * J;
        cert.normalized_residual = (unit.transpose() * min_norm_weights(unit, tol).lambda).norm();
    }
    return cert;
}

std::optional<Point> descent_direction(const Matrix& J, double v_cap, double tol) {
    if (!(v_cap > 0.0)) throw ContractError("descent_direction: v_cap must be positive");
    const CriticalityCertificate cert = criticality_certificate(J, tol);
    if (!cert.descent) return std::nullopt;
    const double inf_norm = cert.descent->cwiseAbs().maxCoeff();
    return Point(*cert.descent * (v_cap / inf_norm));
}

namespace {

std::vector<double> axis_points(const Interval& iv, double resolution) {
    const auto steps = static_cast<std::size_t>(std::floor(iv.width() / resolution + 1e-9));
    std::vector<double> pts(steps + 1);
    for (std::size_t k = 0; k <= steps; ++k) pts[k] = iv.lower + static_cast<double>(k) * resolution;
    return pts;
}

enum class GridTest { strict, pareto };

GridOracleResult grid_scan(const ProblemSpec& problem, const Box& box, double resolution, const Point& x_star,
                           double tol, kernels::Isa isa, GridTest test) {
    const std::size_t n = problem.dimension;
    if (n > 4) throw OracleError("grid oracle is limited to n <= 4 (got n=" + std::to_string(n) + ")");
    if (box.size() != n) throw ContractError("grid oracle: box dimension does not match the problem");
    if (!(resolution > 0.0)) throw ContractError("grid oracle: resolution must be positive");
    if (problem.bounds) {
        for (std::size_t j = 0; j < n; ++j) {
            if (box[j].lower < (*problem.bounds)[j].lower || box[j].upper > (*problem.bounds)[j].upper) {
                throw ContractError("grid oracle: box leaves the problem bounds");
            }
        }
    }

    const ObjectiveVector target = evaluate(problem, x_star);
    const std::size_t m = problem.num_objectives;

    std::vector<std::vector<double>> axes;
    axes.reserve(n);
    for (const Interval& iv : box) axes.push_back(axis_points(iv, resolution));

    constexpr std::size_t block = 4096;
    std::vector<double> values(block * m);
    std::vector<Point> points(block, Point(static_cast<Eigen::Index>(n)));
    std::vector<std::size_t> index(n, 0);

    GridOracleResult result;
    bool done = false;
    while (!done) {
        std::size_t filled = 0;
        while (filled < block && !done) {
            Point& x = points[filled];
            for (std::size_t j = 0; j < n; ++j) x[static_cast<Eigen::Index>(j)] = axes[j][index[j]];
            const ObjectiveVector f = evaluate(problem, x);
            for (std::size_t i = 0; i < m; ++i) values[i * block + filled] = f[static_cast<Eigen::Index>(i)];
            ++filled;

            std::size_t j = 0;
            while (j < n && ++index[j] == axes[j].size()) index[j++] = 0;
            done = j == n;
        }
        // Compact the tail block so the scan sees a dense SoA layout.
        if (filled < block) {
            for (std::size_t i = 1; i < m; ++i) {
                std::copy_n(values.begin() + static_cast<std::ptrdiff_t>(i * block), filled,
                            values.begin() + static_cast<std::ptrdiff_t>(i * filled));
            }
        }
        const std::span<const double> block_values(values.data(), filled * m);
        const std::span<const double> target_values(target.data(), m);
        const std::size_t hit =
            test == GridTest::strict
                ? kernels::first_strict_dominator(block_values, filled, target_values, tol, isa)
                : kernels::first_pareto_dominator(block_values, filled, target_values, tol, isa);
        result.points_scanned += filled;
        if (hit != kernels::npos) {
            result.undominated = false;
            result.witness = points[hit];
            return result;
        }
    }
    return result;
}

}  // namespace

GridOracleResult weak_pareto_grid_scan(const ProblemSpec& problem, const Box& box, double resolution,
                                       const Point& x_star, double tol, kernels::Isa isa) {
    return grid_scan(problem, box, resolution, x_star, tol, isa, GridTest::strict);
}

GridOracleResult pareto_grid_scan(const ProblemSpec& problem, const Box& box, double resolution,
                                  const Point& x_star, double tol, kernels::Isa isa) {
    return grid_scan(problem, box, resolution, x_star, tol, isa, GridTest::pareto);
}

bool weak_pareto_grid_oracle(const ProblemSpec& problem, const Box& box, double resolution, const Point& x_star,
                             double tol) {
    return weak_pareto_grid_scan(problem, box, resolution, x_star, tol).undominated;
}

bool pareto_grid_oracle(const ProblemSpec& problem, const Box& box, double resolution, const Point& x_star,
                        double tol) {
    return pareto_grid_scan(problem, box, resolution, x_star, tol).undominated;
}

bool fejer_check(const std::vector<Point>& trajectory, const Point& anchor, double slack) {
    if (trajectory.empty()) throw ContractError("fejer_check: empty trajectory");
    for (const Point& x : trajectory) {
        if (x.size() != anchor.size()) throw ContractError("fejer_check: point and anchor lengths differ");
    }
    for (std::size_t k = 0; k + 1 < trajectory.size(); ++k) {
        if ((trajectory[k + 1] - anchor).norm() > (trajectory[k] - anchor).norm() + slack) return false;
    }
    return true;
}

}  // namespace mopp
