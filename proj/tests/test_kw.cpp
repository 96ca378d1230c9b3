#include <doctest.h>

#include <cmath>
#include <random>

#include "klab/errors.hpp"
#include "klab/kw.hpp"
#include "klab/spectral.hpp"
#include "klab/sweep.hpp"

using namespace klab;

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

MetricField flat1(int res = 16) {
    return flat_metric(Lattice::make(1, {1, 1}, {res, res}), Herm2{1, 0, cdouble(0, 0)});
}

RealField smooth(const LatticePtr& lat, double amp, int axis = 0) {
    RealField f(lat);
    for (std::size_t i = 0; i < f.size(); ++i)
        f[i] = amp * std::cos(kTwoPi * lat->coord(i, axis) / lat->period(axis));
    return f;
}

}  // namespace

TEST_CASE("weighted laplacian scales like 1/eps on flat omega") {
    MetricField g = flat1(32);
    const double eps = 0.25;
    HermField omega = herm_scale(g.g, eps);
    RealField h = smooth(g.lat(), 1.0);
    RealField lap = weighted_laplacian(omega, h);
    RealField flat_lap = apply_flat_laplacian(h);
    double worst = 0;
    for (std::size_t i = 0; i < h.size(); ++i)
        worst = std::max(worst, std::abs(lap[i] - flat_lap[i] / eps));
    CHECK(worst < 1e-10);

    RealField c(g.lat(), 4.2);
    CHECK(sup_norm(weighted_laplacian(omega, c)) < 1e-12);
}

TEST_CASE("weighted laplacian integrates to zero against det omega") {
    MetricField g = flat1(32);
    TwistField tw = geometric_twist(g);
    Solution s = solve_ma(g, tw, 0.5);
    RealField h = smooth(g.lat(), 1.3);
    RealField lap = weighted_laplacian(s.omega_eps, h);
    RealField weighted(g.lat());
    for (std::size_t i = 0; i < h.size(); ++i)
        weighted[i] = lap[i] * herm_det(load_herm(s.omega_eps, i), 1);
    CHECK(std::abs(integrate(weighted)) < 1e-8 * sup_norm(h));
}

TEST_CASE("mbar averages constants exactly and ignores normalization") {
    MetricField g = flat1();
    TwistField tw = synthetic_twist(g, 0.7, std::nullopt);
    Solution s = solve_ma(g, tw, 0.25);
    RealField c(g.lat(), 0.375);
    CHECK(mbar(s, c, g) == doctest::Approx(0.375).epsilon(1e-13));
    RealField zero(g.lat());
    CHECK(mbar(s, zero, g) == 0.0);

    // invariance under u -> u - sup u
    RealField m = smooth(g.lat(), 0.5);
    for (auto& v : m.v) v += 1.0;
    Solution shifted = s;
    shifted.u = normalize_sup(s.u);
    CHECK(mbar(s, m, g) == doctest::Approx(mbar(shifted, m, g)).epsilon(1e-12));
}

TEST_CASE("normalize_sup pins the sup at exactly zero") {
    auto lat = Lattice::make(1, {1, 1}, {8, 8});
    RealField u = smooth(lat, 2.0);
    for (auto& v : u.v) v += 17.5;
    RealField v = normalize_sup(u);
    CHECK(extrema(v).max == 0.0);
    for (std::size_t i = 0; i < v.size(); ++i) CHECK(std::exp(v[i]) <= 1.0);
}

TEST_CASE("weighted poisson: constant M gives the zero solution") {
    MetricField g = flat1();
    TwistField tw = synthetic_twist(g, 0.7, std::nullopt);
    Solution s = solve_ma(g, tw, 0.5);
    RealField m(g.lat(), 2.5);
    WeightedPoissonResult r = solve_weighted_poisson(s.omega_eps, m, 2.5);
    CHECK(sup_norm(r.f) < 1e-12);
    CHECK(r.residual_sup < 1e-12);
}

TEST_CASE("weighted poisson on flat eps omega is the scaled flat solve") {
    MetricField g = flat1(32);
    const double eps = 0.125;
    HermField omega = herm_scale(g.g, eps);
    RealField m = smooth(g.lat(), 0.8);
    WeightedPoissonResult r = solve_weighted_poisson(omega, m, 0.0);
    RealField scaled(g.lat());
    {
        RealField rhs(g.lat());
        for (std::size_t i = 0; i < rhs.size(); ++i) rhs[i] = eps * m[i];
        scaled = solve_flat_poisson(rhs);
        const double lo = extrema(scaled).min;
        for (auto& v : scaled.v) v -= lo;
    }
    double worst = 0;
    for (std::size_t i = 0; i < m.size(); ++i)
        worst = std::max(worst, std::abs(r.f[i] - scaled[i]));
    CHECK(worst < 1e-9);
}

TEST_CASE("weighted poisson round-trips a manufactured solution") {
    MetricField g = flat1(32);
    TwistField tw = geometric_twist(g);
    Solution s = solve_ma(g, tw, 0.5);
    RealField fstar = smooth(g.lat(), 0.6, 1);
    RealField rhs = weighted_laplacian(s.omega_eps, fstar);
    WeightedPoissonResult r = solve_weighted_poisson(s.omega_eps, rhs, 0.0);
    const double lo = extrema(fstar).min;
    double worst = 0;
    for (std::size_t i = 0; i < fstar.size(); ++i)
        worst = std::max(worst, std::abs(r.f[i] - (fstar[i] - lo)));
    CHECK(worst < 1e-8);
    CHECK(extrema(r.f).min == 0.0);
}

TEST_CASE("supersolution constants carry the strict margins") {
    auto lat = Lattice::make(1, {1, 1}, {8, 8});
    RealField f = smooth(lat, 1.0);
    Supersolution s = supersolution(f, 1.0);
    CHECK(s.a == 2.0);
    CHECK(s.b == doctest::Approx(std::log(2.0) + 1.0));
    CHECK(s.a > 1.0);                // A > 1/mbar0
    CHECK(s.b > std::log(s.a));      // B > log A
    for (std::size_t i = 0; i < f.size(); ++i)
        CHECK(s.phi_plus[i] == doctest::Approx(2 * f[i] + s.b));
    CHECK_THROWS_AS(supersolution(f, 0.0), ConfigError);
    CHECK_THROWS_AS(supersolution(f, -0.3), ConfigError);
}

TEST_CASE("comparison check certifies manufactured sub/super pairs") {
    MetricField g = flat1(32);
    TwistField tw = geometric_twist(g);
    Solution s = solve_ma(g, tw, 0.5);
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> amp(0.05, 0.2);
    for (int trial = 0; trial < 20; ++trial) {
        RealField phi(g.lat());
        const double a = amp(rng);
        for (std::size_t i = 0; i < phi.size(); ++i)
            phi[i] = a * std::sin(kTwoPi * g.lat()->coord(i, trial % 2));
        RealField lap = weighted_laplacian(s.omega_eps, phi);
        const double lsup = sup_norm(lap);
        if (lsup > 0.9) {  // keep 1 + lap positive so M stays admissible
            const double scale = 0.9 / lsup;
            for (auto& v : phi.v) v *= scale;
            for (auto& v : lap.v) v *= scale;
        }
        RealField m(g.lat());
        for (std::size_t i = 0; i < m.size(); ++i)
            m[i] = (1.0 + lap[i]) * std::exp(-phi[i]);
        REQUIRE(extrema(m).min > 0);
        RealField lo(g.lat()), hi(g.lat());
        for (std::size_t i = 0; i < phi.size(); ++i) {
            lo[i] = phi[i] - 0.1;
            hi[i] = phi[i] + 0.1;
        }
        ComparisonReport rep = check_comparison(lo, hi, m, s.omega_eps);
        CHECK(rep.hypotheses_ok);
        CHECK(rep.is_sub);
        CHECK(rep.is_super);
        CHECK(rep.ordering_margin == doctest::Approx(0.2).epsilon(1e-12));
        CHECK(rep.ordering_margin >= -1e-8);
    }
}

TEST_CASE("comparison hypotheses flag sign-changing M") {
    MetricField g = flat1();
    HermField omega = herm_scale(g.g, 1.0);
    RealField m = smooth(g.lat(), 1.0);  // changes sign
    RealField phi(g.lat());
    ComparisonReport rep = check_comparison(phi, phi, m, omega);
    CHECK_FALSE(rep.hypotheses_ok);
}

TEST_CASE("differential inequality is exact on flat closed forms") {
    MetricField g = flat1();
    RealField kappa(g.lat());  // flat: kappa = 0

    // rho = 0: residual identically zero
    TwistField tw0 = geometric_twist(g);
    Solution s0 = solve_ma(g, tw0, 0.25);
    TraceDiagnostics tr0 = trace_diagnostics(s0.omega_eps, g);
    CHECK(std::abs(check_diff_inequality(s0, tr0.t, kappa, g)) < 1e-8);

    // lambda twist: residual = lambda / (eps + lambda) at every node
    const double lam = 0.7, eps = 0.25;
    TwistField twl = synthetic_twist(g, lam, std::nullopt);
    Solution sl = solve_ma(g, twl, eps);
    TraceDiagnostics trl = trace_diagnostics(sl.omega_eps, g);
    CHECK(check_diff_inequality(sl, trl.t, kappa, g) ==
          doctest::Approx(lam / (eps + lam)).epsilon(1e-8));
}

TEST_CASE("guenancia inequality on a small synthetic M") {
    MetricField g = flat1();
    TwistField tw = synthetic_twist(g, 0.7, std::nullopt);
    Solution s = solve_ma(g, tw, 0.125);
    TraceDiagnostics tr = trace_diagnostics(s.omega_eps, g);
    // e^T = 1/(eps + lambda); M = c with c e^T <= 1 makes the bound strict
    RealField m(g.lat(), 0.5);
    GuenanciaReport rep = guenancia_check(s, tr.t, m, g);
    CHECK(rep.holds);
    CHECK(rep.lhs == doctest::Approx(0.5 / 0.825 * rep.rhs).epsilon(1e-9));
    CHECK(rep.c_eps == doctest::Approx(std::exp(-s.sup_u)).epsilon(1e-12));
}

TEST_CASE("mbar limit over a sweep: constants, inapplicable flat case") {
    MetricField g = flat1();
    SolverOptions opts;
    TwistField tw = synthetic_twist(g, 0.7, std::nullopt);
    RealField m(g.lat(), 1.0);
    SweepRecord sweep =
        epsilon_sweep(g, tw, geometric_schedule(1, 0.5, 8), opts, &m);
    auto lim = mbar_limit(sweep);
    REQUIRE(lim.has_value());
    CHECK(lim->value == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(lim->cauchy_ok);

    RealField zero(g.lat());
    SweepRecord sweep0 =
        epsilon_sweep(g, tw, geometric_schedule(1, 0.5, 8), opts, &zero);
    CHECK_FALSE(mbar_limit(sweep0).has_value());

    SweepRecord tiny = sweep;
    tiny.entries.resize(3);
    CHECK_THROWS_AS(mbar_limit(tiny), ConfigError);
}

TEST_CASE("1 - A mbar_eps is negative along a BigLimit tail") {
    MetricField g = flat1();
    TwistField tw = synthetic_twist(g, 0.7, std::nullopt);
    RealField m = smooth(g.lat(), 0.25);
    for (auto& v : m.v) v += 1.0;  // positive, mean about 1
    SweepRecord sweep =
        epsilon_sweep(g, tw, geometric_schedule(1, 0.5, 10), {}, &m);
    auto lim = mbar_limit(sweep);
    REQUIRE(lim.has_value());
    const double a = 2.0 / lim->value;
    for (const auto& e : sweep.entries)
        if (std::abs(e.mbar_eps - lim->value) < 0.2 * lim->value)
            CHECK(1.0 - a * e.mbar_eps < 0);
}
