// Compiled with -mavx2 -mfma; only reached after the CPUID check in
// kernels.cpp.
#include "rptf/kernels.hpp"

#if RPTF_HAVE_AVX2_PATH
#include <immintrin.h>

namespace rptf::kernels::avx2 {

namespace {

inline double hsum(__m256d v) noexcept {
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    lo = _mm_add_pd(lo, hi);
    __m128d sh = _mm_unpackhi_pd(lo, lo);
    return _mm_cvtsd_f64(_mm_add_sd(lo, sh));
}

inline double dot_raw(const double* a, const double* b, std::size_t n) noexcept {
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
        acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4), acc1);
    }
    for (; i + 4 <= n; i += 4)
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
    double s = hsum(_mm256_add_pd(acc0, acc1));
    for (; i < n; ++i) s += a[i] * b[i];
    return s;
}

}  // namespace

double dot(std::span<const double> a, std::span<const double> b) noexcept {
    return dot_raw(a.data(), b.data(), a.size());
}

double sum_squares(std::span<const double> a) noexcept {
    return dot_raw(a.data(), a.data(), a.size());
}

void axpy(double alpha, std::span<const double> x, std::span<double> y) noexcept {
    const std::size_t n = x.size();
    const __m256d va = _mm256_set1_pd(alpha);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d vy = _mm256_loadu_pd(y.data() + i);
        vy = _mm256_fmadd_pd(va, _mm256_loadu_pd(x.data() + i), vy);
        _mm256_storeu_pd(y.data() + i, vy);
    }
    for (; i < n; ++i) y[i] += alpha * x[i];
}

void matvec(std::span<const double> m, std::size_t rows, std::size_t cols,
            std::span<const double> x, std::span<double> y) noexcept {
    for (std::size_t r = 0; r < rows; ++r) y[r] = dot_raw(m.data() + r * cols, x.data(), cols);
}

double quadform(std::span<const double> m, std::size_t n, std::span<const double> x) noexcept {
    double s = 0.0;
    for (std::size_t r = 0; r < n; ++r) s += x[r] * dot_raw(m.data() + r * n, x.data(), n);
    return s;
}

}  // namespace rptf::kernels::avx2
#endif
