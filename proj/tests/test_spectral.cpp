#include <doctest.h>

#include <cmath>

#include "klab/errors.hpp"
#include "klab/field.hpp"
#include "klab/spectral.hpp"

using namespace klab;

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

LatticePtr grid1(int n = 32) { return Lattice::make(1, {1, 1}, {n, n}); }

RealField coord_field(const LatticePtr& lat, int axis, double freq,
                      bool use_cos) {
    RealField f(lat);
    for (std::size_t i = 0; i < f.size(); ++i) {
        const double arg = kTwoPi * freq * lat->coord(i, axis) / lat->period(axis);
        f[i] = use_cos ? std::cos(arg) : std::sin(arg);
    }
    return f;
}

}  // namespace

TEST_CASE("wirtinger derivative of e^{2 pi i x} is pi i e^{2 pi i x}") {
    auto lat = grid1();
    ComplexField f(lat);
    for (std::size_t i = 0; i < f.size(); ++i) {
        const double arg = kTwoPi * lat->coord(i, 0);
        f[i] = cdouble(std::cos(arg), std::sin(arg));
    }
    // d/dz = (d/dx - i d/dy)/2, so a pure-x mode picks up half its x-frequency
    ComplexField dz = wirtinger(f, 0, false);
    ComplexField dzb = wirtinger(f, 0, true);
    double worst = 0, worst_b = 0;
    for (std::size_t i = 0; i < f.size(); ++i) {
        worst = std::max(worst, std::abs(dz[i] - cdouble(0, kTwoPi / 2) * f[i]));
        worst_b = std::max(worst_b, std::abs(dzb[i] - cdouble(0, kTwoPi / 2) * f[i]));
    }
    CHECK(worst < 1e-11);
    CHECK(worst_b < 1e-11);
}

TEST_CASE("wirtinger derivative of e^{2 pi i y} distinguishes z from zbar") {
    auto lat = grid1();
    ComplexField f(lat);
    for (std::size_t i = 0; i < f.size(); ++i) {
        const double arg = kTwoPi * lat->coord(i, 1);
        f[i] = cdouble(std::cos(arg), std::sin(arg));
    }
    // f = e^{2 pi i y} depends on z - zbar: d_z f = (pi) f, d_zbar f = -(pi) f
    ComplexField dz = wirtinger(f, 0, false);
    ComplexField dzb = wirtinger(f, 0, true);
    double worst = 0, worst_b = 0;
    for (std::size_t i = 0; i < f.size(); ++i) {
        worst = std::max(worst, std::abs(dz[i] - (kTwoPi / 2) * f[i]));
        worst_b = std::max(worst_b, std::abs(dzb[i] + (kTwoPi / 2) * f[i]));
    }
    CHECK(worst < 1e-11);
    CHECK(worst_b < 1e-11);
}

TEST_CASE("dds of cos(2 pi x) has the closed-form 11bar entry") {
    auto lat = grid1();
    RealField u = coord_field(lat, 0, 1, true);
    HermField h = dds(u);
    // d_z d_zbar cos(2 pi x) = -(pi^2) cos(2 pi x)
    const double c = kTwoPi * kTwoPi / 4.0;
    double worst = 0;
    for (std::size_t i = 0; i < u.size(); ++i)
        worst = std::max(worst, std::abs(h.at(i, 0, 0) + c * u[i]));
    CHECK(worst < 1e-10);
    CHECK(herm_asymmetry(h) < 1e-13);
}

TEST_CASE("dds against second-order finite differences") {
    auto lat = Lattice::make(1, {1, 1}, {64, 64});
    RealField u(lat);
    for (std::size_t i = 0; i < u.size(); ++i) {
        const double x = lat->coord(i, 0), y = lat->coord(i, 1);
        u[i] = std::exp(0.4 * std::cos(kTwoPi * x)) * std::sin(kTwoPi * y);
    }
    HermField h = dds(u);
    const double hx = lat->spacing(0), hy = lat->spacing(1);
    const int nx = lat->resolution(0), ny = lat->resolution(1);
    auto at = [&](int ix, int iy) {
        return u[lat->flatten({(ix + nx) % nx, (iy + ny) % ny})];
    };
    double worst = 0;
    for (int ix = 0; ix < nx; ++ix)
        for (int iy = 0; iy < ny; ++iy) {
            const double lap_fd =
                (at(ix + 1, iy) - 2 * at(ix, iy) + at(ix - 1, iy)) / (hx * hx) +
                (at(ix, iy + 1) - 2 * at(ix, iy) + at(ix, iy - 1)) / (hy * hy);
            const std::size_t node = lat->flatten({ix, iy});
            // d_z d_zbar = (lap_x + lap_y)/4
            worst = std::max(worst,
                             std::abs(h.at(node, 0, 0).real() - lap_fd / 4.0));
        }
    // second-order stencil error, not spectral error
    CHECK(worst < 0.05);
}

TEST_CASE("flat poisson inverts a single mode exactly") {
    auto lat = grid1();
    RealField rhs = coord_field(lat, 0, 2, true);
    RealField u = solve_flat_poisson(rhs);
    // d_z d_zbar u = rhs with u = -rhs / (pi k)^2 for the k = 2 x-mode
    const double scale = -1.0 / (kTwoPi * kTwoPi);  // -(1/4)/(pi 2)^2 ... = -1/(2pi)^2
    double worst = 0;
    for (std::size_t i = 0; i < u.size(); ++i)
        worst = std::max(worst, std::abs(u[i] - scale * rhs[i]));
    CHECK(worst < 1e-12);
    CHECK(std::abs(mean(u)) < 1e-14);
}

TEST_CASE("flat poisson projects a nonzero mean and reports it") {
    auto lat = grid1();
    RealField rhs = coord_field(lat, 1, 1, true);
    for (auto& v : rhs.v) v += 0.25;
    PoissonStats stats;
    RealField u = solve_flat_poisson(rhs, &stats);
    CHECK(stats.projected);
    CHECK(stats.projected_mean == doctest::Approx(0.25).epsilon(1e-12));
    RealField back = apply_flat_laplacian(u);
    double worst = 0;
    for (std::size_t i = 0; i < u.size(); ++i)
        worst = std::max(worst, std::abs(back[i] - (rhs[i] - 0.25)));
    CHECK(worst < 1e-11);
}

TEST_CASE("spectral quadrature reproduces the Bessel integral") {
    // integral over [0,1]^2 of e^{cos 2 pi x} = I_0(1); frozen from an
    // independent series evaluation sum 1/(4^k k!^2)
    const double kBesselI0 = 1.2660658777520083356;
    auto lat = grid1();
    RealField f(lat);
    for (std::size_t i = 0; i < f.size(); ++i)
        f[i] = std::exp(std::cos(kTwoPi * lat->coord(i, 0)));
    CHECK(integrate(f) == doctest::Approx(kBesselI0).epsilon(1e-13));
}

TEST_CASE("lipschitz estimate of a single mode is its max gradient") {
    auto lat = Lattice::make(1, {1, 1}, {64, 64});
    RealField f = coord_field(lat, 0, 1, true);
    CHECK(lipschitz_estimate(f) == doctest::Approx(kTwoPi).epsilon(1e-6));
    RealField c(lat, 3.5);
    CHECK(lipschitz_estimate(c) < 1e-12);
}

TEST_CASE("tail energy flags rough fields and clears smooth ones") {
    auto lat = grid1();
    RealField smooth = coord_field(lat, 0, 1, true);
    CHECK(tail_energy_fraction(smooth) < 1e-20);
    RealField rough(lat);
    for (std::size_t i = 0; i < rough.size(); ++i)
        rough[i] = (lat->unflatten(i)[0] % 2) ? 1.0 : -1.0;  // pure Nyquist
    CHECK(tail_energy_fraction(rough) > 0.5);
}

TEST_CASE("derivatives on n = 2 lattices act axis by axis") {
    auto lat = Lattice::make(2, {1, 1, 1, 1}, {8, 8, 8, 8});
    RealField u(lat);
    for (std::size_t i = 0; i < u.size(); ++i)
        u[i] = std::cos(kTwoPi * lat->coord(i, 2));  // x_1 mode
    HermField h = dds(u);
    const double c = kTwoPi * kTwoPi / 4.0;
    double worst = 0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        worst = std::max(worst, std::abs(h.at(i, 1, 1) + c * u[i]));
        worst = std::max(worst, std::abs(h.at(i, 0, 0)));
        worst = std::max(worst, std::abs(h.at(i, 0, 1)));
    }
    CHECK(worst < 1e-10);
}

TEST_CASE("lattice validation rejects bad parameters") {
    CHECK_THROWS_AS(Lattice::make(3, {1, 1, 1, 1, 1, 1}, {8, 8, 8, 8, 8, 8}),
                    ConfigError);
    CHECK_THROWS_AS(Lattice::make(1, {1, 1}, {12, 12}), ConfigError);  // not 2^k
    CHECK_THROWS_AS(Lattice::make(1, {1, 1}, {4, 4}), ConfigError);    // below 8
    CHECK_THROWS_AS(Lattice::make(1, {1, -1}, {8, 8}), ConfigError);
    CHECK_THROWS_AS(Lattice::make(1, {1}, {8, 8}), ConfigError);
}
