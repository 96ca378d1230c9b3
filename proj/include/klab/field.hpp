#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <vector>

#include "klab/lattice.hpp"

namespace klab {

using cdouble = std::complex<double>;

struct RealField {
    LatticePtr lat;
    std::vector<double> v;

    RealField() = default;
    explicit RealField(LatticePtr l, double fill = 0.0)
        : lat(std::move(l)), v(lat->nodes(), fill) {}

    std::size_t size() const { return v.size(); }
    double& operator[](std::size_t i) { return v[i]; }
    double operator[](std::size_t i) const { return v[i]; }
};

struct ComplexField {
    LatticePtr lat;
    std::vector<cdouble> v;

    ComplexField() = default;
    explicit ComplexField(LatticePtr l, cdouble fill = 0.0)
        : lat(std::move(l)), v(lat->nodes(), fill) {}

    std::size_t size() const { return v.size(); }
    cdouble& operator[](std::size_t i) { return v[i]; }
    cdouble operator[](std::size_t i) const { return v[i]; }
};

struct Extrema {
    double min, max;
    std::size_t argmin, argmax;
};

// Node-wise evaluation of a function of physical coordinates.
RealField make_field(const LatticePtr& lat,
                     const std::function<double(const std::vector<double>&)>& f);

Extrema extrema(const RealField& f);
double sup_norm(const RealField& f);
double sup_norm(const ComplexField& f);

double mean(const RealField& f);
// mean of node values times total period volume; spectrally accurate
// quadrature for smooth periodic integrands
double integrate(const RealField& f);

// real/imaginary split helpers
ComplexField to_complex(const RealField& f);
RealField real_part(const ComplexField& f);
// throws if the imaginary content exceeds tol * (1 + sup|f|)
RealField real_part_checked(const ComplexField& f, double tol = 1e-10);

}  // namespace klab
