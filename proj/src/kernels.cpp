#include "mopp/kernels.hpp"

#include <vector>

#include "mopp/errors.hpp"

namespace mopp::kernels {

std::string_view to_string(Isa isa) noexcept {
    switch (isa) {
        case Isa::scalar: return "scalar";
        case Isa::avx2: return "avx2";
    }
    return "scalar";
}

Isa detect_isa() noexcept {
#if defined(__x86_64__) || defined(_M_X64)
    static const Isa best = (detail::avx2_compiled() && __builtin_cpu_supports("avx2")) ? Isa::avx2 : Isa::scalar;
    return best;
#else
    return Isa::scalar;
#endif
}

namespace detail {

std::size_t first_strict_dominator_scalar(const double* values, std::size_t count, const double* target,
                                          std::size_t m, double tol) noexcept {
    std::vector<double> lo(m);
    for (std::size_t i = 0; i < m; ++i) lo[i] = target[i] - tol;
    for (std::size_t p = 0; p < count; ++p) {
        bool all = true;
        for (std::size_t i = 0; i < m && all; ++i) all = values[i * count + p] < lo[i];
        if (all) return p;
    }
    return npos;
}

std::size_t first_pareto_dominator_scalar(const double* values, std::size_t count, const double* target,
                                          std::size_t m, double tol) noexcept {
    std::vector<double> lo(m), hi(m);
    for (std::size_t i = 0; i < m; ++i) {
        lo[i] = target[i] - tol;
        hi[i] = target[i] + tol;
    }
    for (std::size_t p = 0; p < count; ++p) {
        bool weak = true;
        bool some_strict = false;
        for (std::size_t i = 0; i < m; ++i) {
            const double v = values[i * count + p];
            weak = weak && v <= hi[i];
            some_strict = some_strict || v < lo[i];
        }
        if (weak && some_strict) return p;
    }
    return npos;
}

#if !defined(MOPP_HAVE_AVX2_TU)
bool avx2_compiled() noexcept { return false; }
std::size_t first_strict_dominator_avx2(const double* values, std::size_t count, const double* target,
                                        std::size_t m, double tol) noexcept {
    return first_strict_dominator_scalar(values, count, target, m, tol);
}
std::size_t first_pareto_dominator_avx2(const double* values, std::size_t count, const double* target,
                                        std::size_t m, double tol) noexcept {
    return first_pareto_dominator_scalar(values, count, target, m, tol);
}
#endif

}  // namespace detail

namespace {

void check_block(std::span<const double> values, std::size_t count, std::span<const double> target) {
    if (target.empty()) throw ContractError("dominance scan: empty target");
    if (values.size() != count * target.size()) {
        throw ContractError("dominance scan: block size does not match count * objectives");
    }
}

}  // namespace

std::size_t first_strict_dominator(std::span<const double> values, std::size_t count,
                                   std::span<const double> target, double tol, Isa isa) {
    check_block(values, count, target);
    if (isa == Isa::avx2) {
        return detail::first_strict_dominator_avx2(values.data(), count, target.data(), target.size(), tol);
    }
    return detail::first_strict_dominator_scalar(values.data(), count, target.data(), target.size(), tol);
}

std::size_t first_pareto_dominator(std::span<const double> values, std::size_t count,
                                   std::span<const double> target, double tol, Isa isa) {
    check_block(values, count, target);
    if (isa == Isa::avx2) {
        return detail::first_pareto_dominator_avx2(values.data(), count, target.data(), target.size(), tol);
    }
    return detail::first_pareto_dominator_scalar(values.data(), count, target.data(), target.size(), tol);
}

}  // namespace mopp::kernels
