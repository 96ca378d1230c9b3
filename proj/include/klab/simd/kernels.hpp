#pragma once

#include <cstddef>

// Runtime-dispatched arithmetic kernels for the flat double arrays that back
// every field. Two implementations: a scalar reference and an AVX2 variant.
// Both use the same pairwise-blocked reduction order, so results agree to
// rounding and a given binary is deterministic regardless of which one runs.
//
// Selection: AVX2 when the CPU supports it, overridable with KLAB_SIMD=scalar
// or KLAB_SIMD=avx2.

namespace klab::simd {

struct MinMax {
    double min, max;
    std::size_t argmin, argmax;  // first occurrence in scan order
};

struct Kernels {
    double (*sum)(const double* x, std::size_t n);
    double (*dot)(const double* x, const double* y, std::size_t n);
    void (*axpy)(double* y, double a, const double* x, std::size_t n);   // y += a*x
    void (*axpby)(double* y, double a, const double* x, double b, std::size_t n);  // y = a*x + b*y
    void (*mul)(double* dst, const double* x, const double* y, std::size_t n);
    MinMax (*minmax)(const double* x, std::size_t n);
    const char* name;
};

const Kernels& scalar_kernels();
#if KLAB_HAVE_AVX2
const Kernels& avx2_kernels();
#endif
bool avx2_supported();

// Kernel set chosen at first use; stable for the process lifetime.
const Kernels& active();

}  // namespace klab::simd
