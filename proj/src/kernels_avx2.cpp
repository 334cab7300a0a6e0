// Compiled with -mavx2; only reached after detect_isa() confirmed CPU support.

#include <immintrin.h>

#include <vector>

#include "mopp/kernels.hpp"

namespace mopp::kernels::detail {

namespace {

inline std::size_t lowest_lane(int bits) noexcept {
    return static_cast<std::size_t>(__builtin_ctz(static_cast<unsigned>(bits)));
}

}  // namespace

bool avx2_compiled() noexcept { return true; }

std::size_t first_strict_dominator_avx2(const double* values, std::size_t count, const double* target,
                                        std::size_t m, double tol) noexcept {
    std::vector<double> lo(m);
    for (std::size_t i = 0; i < m; ++i) lo[i] = target[i] - tol;

    std::size_t p = 0;
    for (; p + 4 <= count; p += 4) {
        __m256d all = _mm256_castsi256_pd(_mm256_set1_epi64x(-1));
        for (std::size_t i = 0; i < m; ++i) {
            const __m256d v = _mm256_loadu_pd(values + i * count + p);
            all = _mm256_and_pd(all, _mm256_cmp_pd(v, _mm256_set1_pd(lo[i]), _CMP_LT_OQ));
        }
        const int bits = _mm256_movemask_pd(all);
        if (bits != 0) return p + lowest_lane(bits);
    }
    for (; p < count; ++p) {
        bool all = true;
        for (std::size_t i = 0; i < m && all; ++i) all = values[i * count + p] < lo[i];
        if (all) return p;
    }
    return npos;
}

std::size_t first_pareto_dominator_avx2(const double* values, std::size_t count, const double* target,
                                        std::size_t m, double tol) noexcept {
    std::vector<double> lo(m), hi(m);
    for (std::size_t i = 0; i < m; ++i) {
        lo[i] = target[i] - tol;
        hi[i] = target[i] + tol;
    }

    std::size_t p = 0;
    for (; p + 4 <= count; p += 4) {
        __m256d weak = _mm256_castsi256_pd(_mm256_set1_epi64x(-1));
        __m256d strict = _mm256_setzero_pd();
        for (std::size_t i = 0; i < m; ++i) {
            const __m256d v = _mm256_loadu_pd(values + i * count + p);
            weak = _mm256_and_pd(weak, _mm256_cmp_pd(v, _mm256_set1_pd(hi[i]), _CMP_LE_OQ));
            strict = _mm256_or_pd(strict, _mm256_cmp_pd(v, _mm256_set1_pd(lo[i]), _CMP_LT_OQ));
        }
        const int bits = _mm256_movemask_pd(_mm256_and_pd(weak, strict));
        if (bits != 0) return p + lowest_lane(bits);
    }
    for (; p < count; ++p) {
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

}  // namespace mopp::kernels::detail
