#include "klab/simd/kernels.hpp"

#include <limits>

namespace klab::simd {
namespace {

// Four running accumulators, matching the lane structure of the AVX2 kernels
// closely enough that the two variants agree to rounding noise.

double sum_scalar(const double* x, std::size_t n) {
    double a0 = 0, a1 = 0, a2 = 0, a3 = 0;
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        a0 += x[i];
        a1 += x[i + 1];
        a2 += x[i + 2];
        a3 += x[i + 3];
    }
    double tail = 0;
    for (; i < n; ++i) tail += x[i];
    return ((a0 + a2) + (a1 + a3)) + tail;
}

double dot_scalar(const double* x, const double* y, std::size_t n) {
    double a0 = 0, a1 = 0, a2 = 0, a3 = 0;
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        a0 += x[i] * y[i];
        a1 += x[i + 1] * y[i + 1];
        a2 += x[i + 2] * y[i + 2];
        a3 += x[i + 3] * y[i + 3];
    }
    double tail = 0;
    for (; i < n; ++i) tail += x[i] * y[i];
    return ((a0 + a2) + (a1 + a3)) + tail;
}

void axpy_scalar(double* y, double a, const double* x, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

void axpby_scalar(double* y, double a, const double* x, double b, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] = a * x[i] + b * y[i];
}

void mul_scalar(double* dst, const double* x, const double* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) dst[i] = x[i] * y[i];
}

MinMax minmax_scalar(const double* x, std::size_t n) {
    MinMax r{std::numeric_limits<double>::infinity(),
             -std::numeric_limits<double>::infinity(), 0, 0};
    for (std::size_t i = 0; i < n; ++i) {
        if (x[i] < r.min) { r.min = x[i]; r.argmin = i; }
        if (x[i] > r.max) { r.max = x[i]; r.argmax = i; }
    }
    return r;
}

}  // namespace

const Kernels& scalar_kernels() {
    static const Kernels k{sum_scalar, dot_scalar, axpy_scalar,
                           axpby_scalar, mul_scalar, minmax_scalar, "scalar"};
    return k;
}

}  // namespace klab::simd
