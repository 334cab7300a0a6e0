#pragma once

// Dominance scans over blocks of objective vectors.
//
// Blocks are stored objective-major ("structure of arrays"): component i of
// point p lives at values[i * count + p]. Each scan has a scalar reference
// implementation and, on x86-64, an AVX2 variant; `dispatch` selects one at
// runtime. All variants return the same index for the same input.

#include <cstddef>
#include <span>
#include <string_view>

namespace mopp::kernels {

inline constexpr std::size_t npos = static_cast<std::size_t>(-1);

enum class Isa { scalar, avx2 };

std::string_view to_string(Isa isa) noexcept;

/// Best instruction set supported by both the build and the running CPU.
Isa detect_isa() noexcept;

/// Index of the first point p with values[i][p] < target[i] - tol for every
/// component i, or npos.
std::size_t first_strict_dominator(std::span<const double> values, std::size_t count,
                                   std::span<const double> target, double tol, Isa isa);

/// Index of the first point p that Pareto-dominates the target: every
/// component <= target[i] + tol and at least one component < target[i] - tol.
std::size_t first_pareto_dominator(std::span<const double> values, std::size_t count,
                                   std::span<const double> target, double tol, Isa isa);

inline std::size_t first_strict_dominator(std::span<const double> values, std::size_t count,
                                          std::span<const double> target, double tol) {
    return first_strict_dominator(values, count, target, tol, detect_isa());
}

inline std::size_t first_pareto_dominator(std::span<const double> values, std::size_t count,
                                          std::span<const double> target, double tol) {
    return first_pareto_dominator(values, count, target, tol, detect_isa());
}

namespace detail {
std::size_t first_strict_dominator_scalar(const double* values, std::size_t count, const double* target,
                                          std::size_t m, double tol) noexcept;
std::size_t first_pareto_dominator_scalar(const double* values, std::size_t count, const double* target,
                                          std::size_t m, double tol) noexcept;
std::size_t first_strict_dominator_avx2(const double* values, std::size_t count, const double* target,
                                        std::size_t m, double tol) noexcept;
std::size_t first_pareto_dominator_avx2(const double* values, std::size_t count, const double* target,
                                        std::size_t m, double tol) noexcept;
bool avx2_compiled() noexcept;
}  // namespace detail

}  // namespace mopp::kernels
