#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "klab/simd/kernels.hpp"

using namespace klab;

namespace {

std::vector<double> random_vec(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> d(-3.0, 3.0);
    std::vector<double> v(n);
    for (auto& x : v) x = d(rng);
    return v;
}

// odd lengths exercise the remainder loops of the vector variants
const std::size_t kSizes[] = {1, 3, 4, 7, 8, 64, 1000, 4096, 4099};

}  // namespace

TEST_CASE("scalar and avx2 kernels agree bit for bit") {
#if !KLAB_HAVE_AVX2
    return;
#else
    if (!simd::avx2_supported()) return;
    const auto& s = simd::scalar_kernels();
    const auto& a = simd::avx2_kernels();
    for (std::size_t n : kSizes) {
        auto x = random_vec(n, 11 + n), y = random_vec(n, 23 + n);
        CHECK(s.sum(x.data(), n) == a.sum(x.data(), n));
        CHECK(s.dot(x.data(), y.data(), n) == a.dot(x.data(), y.data(), n));

        auto y1 = y, y2 = y;
        s.axpy(y1.data(), 1.25, x.data(), n);
        a.axpy(y2.data(), 1.25, x.data(), n);
        CHECK(y1 == y2);

        y1 = y;
        y2 = y;
        s.axpby(y1.data(), 0.5, x.data(), -2.0, n);
        a.axpby(y2.data(), 0.5, x.data(), -2.0, n);
        CHECK(y1 == y2);

        std::vector<double> d1(n), d2(n);
        s.mul(d1.data(), x.data(), y.data(), n);
        a.mul(d2.data(), x.data(), y.data(), n);
        CHECK(d1 == d2);

        const auto m1 = s.minmax(x.data(), n);
        const auto m2 = a.minmax(x.data(), n);
        CHECK(m1.min == m2.min);
        CHECK(m1.max == m2.max);
        CHECK(m1.argmin == m2.argmin);
        CHECK(m1.argmax == m2.argmax);
    }
#endif
}

TEST_CASE("minmax reports the first occurrence on ties") {
    const auto& k = simd::active();
    std::vector<double> v{2, 1, 3, 1, 3, 1};
    const auto m = k.minmax(v.data(), v.size());
    CHECK(m.min == 1);
    CHECK(m.argmin == 1);
    CHECK(m.max == 3);
    CHECK(m.argmax == 2);

    // ties straddling vector-lane boundaries
    std::vector<double> w(37, 5.0);
    w[9] = -1;
    w[20] = -1;
    w[13] = 7;
    w[29] = 7;
    const auto mw = k.minmax(w.data(), w.size());
    CHECK(mw.argmin == 9);
    CHECK(mw.argmax == 13);
}

TEST_CASE("kernel reductions match a plain loop") {
    const auto& k = simd::active();
    auto x = random_vec(513, 5), y = random_vec(513, 6);
    double sum = 0, dot = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sum += x[i];
        dot += x[i] * y[i];
    }
    CHECK(k.sum(x.data(), x.size()) == doctest::Approx(sum).epsilon(1e-13));
    CHECK(k.dot(x.data(), y.data(), x.size()) == doctest::Approx(dot).epsilon(1e-13));
}
