#include "klab/field.hpp"

#include <cmath>

#include "klab/errors.hpp"
#include "klab/simd/kernels.hpp"

namespace klab {

RealField make_field(const LatticePtr& lat,
                     const std::function<double(const std::vector<double>&)>& f) {
    RealField out(lat);
    const int d = lat->real_dim();
    std::vector<double> x(d);
    for (std::size_t i = 0; i < out.size(); ++i) {
        for (int a = 0; a < d; ++a) x[a] = lat->coord(i, a);
        out[i] = f(x);
    }
    return out;
}

Extrema extrema(const RealField& f) {
    auto mm = simd::active().minmax(f.v.data(), f.size());
    return Extrema{mm.min, mm.max, mm.argmin, mm.argmax};
}

double sup_norm(const RealField& f) {
    auto mm = simd::active().minmax(f.v.data(), f.size());
    return std::max(std::abs(mm.min), std::abs(mm.max));
}

double sup_norm(const ComplexField& f) {
    double m = 0;
    for (const auto& z : f.v) m = std::max(m, std::abs(z));
    return m;
}

double mean(const RealField& f) {
    return simd::active().sum(f.v.data(), f.size()) / static_cast<double>(f.size());
}

double integrate(const RealField& f) { return mean(f) * f.lat->volume(); }

ComplexField to_complex(const RealField& f) {
    ComplexField out(f.lat);
    for (std::size_t i = 0; i < f.size(); ++i) out[i] = f[i];
    return out;
}

RealField real_part(const ComplexField& f) {
    RealField out(f.lat);
    for (std::size_t i = 0; i < f.size(); ++i) out[i] = f[i].real();
    return out;
}

RealField real_part_checked(const ComplexField& f, double tol) {
    double im = 0, re = 0;
    for (const auto& z : f.v) {
        im = std::max(im, std::abs(z.imag()));
        re = std::max(re, std::abs(z.real()));
    }
    if (im > tol * (1 + re))
        throw SolverError("field has non-negligible imaginary part: " + std::to_string(im));
    return real_part(f);
}

}  // namespace klab
