#include "klab/simd/kernels.hpp"

#include <cstdlib>
#include <cstring>

namespace klab::simd {

bool avx2_supported() {
#if KLAB_HAVE_AVX2
    return __builtin_cpu_supports("avx2");
#else
    return false;
#endif
}

namespace {

const Kernels& select() {
    const char* req = std::getenv("KLAB_SIMD");
#if KLAB_HAVE_AVX2
    if (req && std::strcmp(req, "scalar") == 0) return scalar_kernels();
    if (req && std::strcmp(req, "avx2") == 0) return avx2_kernels();
    if (avx2_supported()) return avx2_kernels();
#else
    (void)req;
#endif
    return scalar_kernels();
}

}  // namespace

const Kernels& active() {
    static const Kernels& k = select();
    return k;
}

}  // namespace klab::simd
