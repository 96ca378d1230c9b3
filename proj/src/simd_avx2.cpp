#include "klab/simd/kernels.hpp"

#if KLAB_HAVE_AVX2

#include <immintrin.h>

#include <cstdint>
#include <limits>

namespace klab::simd {
namespace {

inline double hsum(__m256d v) {
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    // pairs (lane0+lane2, lane1+lane3), then across: matches the scalar
    // four-accumulator reduction order.
    __m128d p = _mm_add_pd(lo, hi);
    return _mm_cvtsd_f64(p) + _mm_cvtsd_f64(_mm_unpackhi_pd(p, p));
}

double sum_avx2(const double* x, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) acc = _mm256_add_pd(acc, _mm256_loadu_pd(x + i));
    double tail = 0;
    for (; i < n; ++i) tail += x[i];
    return hsum(acc) + tail;
}

double dot_avx2(const double* x, const double* y, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
        acc = _mm256_add_pd(acc, _mm256_mul_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
    double tail = 0;
    for (; i < n; ++i) tail += x[i] * y[i];
    return hsum(acc) + tail;
}

void axpy_avx2(double* y, double a, const double* x, std::size_t n) {
    const __m256d va = _mm256_set1_pd(a);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d vy = _mm256_loadu_pd(y + i);
        vy = _mm256_add_pd(_mm256_mul_pd(va, _mm256_loadu_pd(x + i)), vy);
        _mm256_storeu_pd(y + i, vy);
    }
    for (; i < n; ++i) y[i] += a * x[i];
}

void axpby_avx2(double* y, double a, const double* x, double b, std::size_t n) {
    const __m256d va = _mm256_set1_pd(a);
    const __m256d vb = _mm256_set1_pd(b);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d vy = _mm256_mul_pd(vb, _mm256_loadu_pd(y + i));
        vy = _mm256_add_pd(_mm256_mul_pd(va, _mm256_loadu_pd(x + i)), vy);
        _mm256_storeu_pd(y + i, vy);
    }
    for (; i < n; ++i) y[i] = a * x[i] + b * y[i];
}

void mul_avx2(double* dst, const double* x, const double* y, std::size_t n) {
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
        _mm256_storeu_pd(dst + i, _mm256_mul_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
    for (; i < n; ++i) dst[i] = x[i] * y[i];
}

MinMax minmax_avx2(const double* x, std::size_t n) {
    MinMax r{std::numeric_limits<double>::infinity(),
             -std::numeric_limits<double>::infinity(), 0, 0};
    std::size_t i = 0;
    if (n >= 8) {
        __m256d vmin = _mm256_loadu_pd(x);
        __m256d vmax = vmin;
        __m256d imin = _mm256_set_pd(3, 2, 1, 0);
        __m256d imax = imin;
        __m256d idx = imin;
        const __m256d four = _mm256_set1_pd(4);
        for (i = 4; i + 4 <= n; i += 4) {
            idx = _mm256_add_pd(idx, four);
            __m256d v = _mm256_loadu_pd(x + i);
            __m256d ltm = _mm256_cmp_pd(v, vmin, _CMP_LT_OQ);
            vmin = _mm256_blendv_pd(vmin, v, ltm);
            imin = _mm256_blendv_pd(imin, idx, ltm);
            __m256d gtm = _mm256_cmp_pd(v, vmax, _CMP_GT_OQ);
            vmax = _mm256_blendv_pd(vmax, v, gtm);
            imax = _mm256_blendv_pd(imax, idx, gtm);
        }
        alignas(32) double vs[4], is[4];
        _mm256_store_pd(vs, vmin);
        _mm256_store_pd(is, imin);
        for (int l = 0; l < 4; ++l) {
            // first-occurrence tie break across lanes
            if (vs[l] < r.min || (vs[l] == r.min && static_cast<std::size_t>(is[l]) < r.argmin)) {
                r.min = vs[l];
                r.argmin = static_cast<std::size_t>(is[l]);
            }
        }
        _mm256_store_pd(vs, vmax);
        _mm256_store_pd(is, imax);
        r.max = -std::numeric_limits<double>::infinity();
        for (int l = 0; l < 4; ++l) {
            if (vs[l] > r.max || (vs[l] == r.max && static_cast<std::size_t>(is[l]) < r.argmax)) {
                r.max = vs[l];
                r.argmax = static_cast<std::size_t>(is[l]);
            }
        }
    }
    for (; i < n; ++i) {
        if (x[i] < r.min) { r.min = x[i]; r.argmin = i; }
        if (x[i] > r.max) { r.max = x[i]; r.argmax = i; }
    }
    return r;
}

}  // namespace

const Kernels& avx2_kernels() {
    static const Kernels k{sum_avx2, dot_avx2, axpy_avx2,
                           axpby_avx2, mul_avx2, minmax_avx2, "avx2"};
    return k;
}

}  // namespace klab::simd

#endif  // KLAB_HAVE_AVX2
