#include <doctest.h>

#include <cmath>

#include "klab/diagnostics.hpp"
#include "klab/errors.hpp"
#include "klab/ma_solver.hpp"
#include "klab/spectral.hpp"
#include "klab/sweep.hpp"

using namespace klab;

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

MetricField flat1(int res = 16) {
    return flat_metric(Lattice::make(1, {1, 1}, {res, res}), Herm2{1, 0, cdouble(0, 0)});
}

MetricField flat2(int res = 8) {
    return flat_metric(Lattice::make(2, {1, 1, 1, 1}, {res, res, res, res}),
                       Herm2{1, 1, cdouble(0, 0)});
}

MetricField conformal(int res, double amp) {
    auto lat = Lattice::make(1, {1, 1}, {res, res});
    RealField f(lat);
    for (std::size_t i = 0; i < f.size(); ++i)
        f[i] = amp * std::cos(kTwoPi * lat->coord(i, 0)) *
               std::cos(kTwoPi * lat->coord(i, 1));
    return conformal_metric(f);
}

// independent n = 1 oracle: the equation is semilinear,
// dds(u + chi) = e^u det g - eps det g with the constant fixed by mass.
// Fixed-point iterate in the zero-mean/constant split.
RealField semilinear_oracle(const MetricField& g, const TwistField& tw, double eps,
                            int iters = 400) {
    RealField det_g(g.lat());
    for (std::size_t i = 0; i < det_g.size(); ++i)
        det_g[i] = herm_det(load_herm(g.g, i), 1);
    const double vol_g = integrate(det_g);
    RealField rho_dens(g.lat());
    for (std::size_t i = 0; i < rho_dens.size(); ++i)
        rho_dens[i] = load_herm(tw.rho, i).h00;

    RealField ubar(g.lat());  // zero-mean part
    double c = 0;
    for (int k = 0; k < iters; ++k) {
        RealField weighted(g.lat());
        for (std::size_t i = 0; i < weighted.size(); ++i)
            weighted[i] = std::exp(ubar[i]) * det_g[i];
        const double mass_target = eps * vol_g + integrate(rho_dens);
        c = std::log(mass_target / integrate(weighted));
        RealField rhs(g.lat());
        for (std::size_t i = 0; i < rhs.size(); ++i)
            rhs[i] = std::exp(ubar[i] + c) * det_g[i] - eps * det_g[i] - rho_dens[i];
        PoissonStats stats;
        ubar = solve_flat_poisson(rhs, &stats);
    }
    for (auto& v : ubar.v) v += c;
    return ubar;
}

}  // namespace

TEST_CASE("flat torus solves to the constant log eps") {
    MetricField g = flat1();
    TwistField tw = geometric_twist(g);
    for (double eps : {1.0, 0.125, 1.0 / 1024}) {
        Solution s = solve_ma(g, tw, eps);
        CHECK(std::abs(s.sup_u - std::log(eps)) < 1e-9);
        CHECK(std::abs(s.inf_u - std::log(eps)) < 1e-9);
        CHECK(s.residual_sup < 1e-10);
        CHECK(ma_residual_sup(s, g) < 1e-10);
        CHECK(mass_integral(s.u, g) == doctest::Approx(eps).epsilon(1e-10));
    }
}

TEST_CASE("synthetic lambda twist has the shifted closed form, n = 1 and 2") {
    for (int n : {1, 2}) {
        MetricField g = n == 1 ? flat1() : flat2();
        TwistField tw = synthetic_twist(g, 0.7, std::nullopt);
        for (double eps : {0.5, 0.03125}) {
            Solution s = solve_ma(g, tw, eps);
            const double expect = n * std::log(eps + 0.7);
            CHECK(std::abs(s.sup_u - expect) < 1e-9);
            CHECK(std::abs(s.inf_u - expect) < 1e-9);
            CHECK(mass_integral(s.u, g) ==
                  doctest::Approx(std::pow(eps + 0.7, n)).epsilon(1e-9));
        }
        Solution limit = solve_limit(g, tw);
        CHECK(std::abs(limit.sup_u - n * std::log(0.7)) < 1e-9);
    }
}

TEST_CASE("solve_limit requires a pointwise positive twist") {
    MetricField g = flat1();
    TwistField tw = geometric_twist(g);  // rho = 0, not positive
    CHECK_THROWS_AS(solve_limit(g, tw), ConfigError);
}

TEST_CASE("generic solver agrees with the semilinear fixed-point oracle") {
    MetricField g = conformal(32, 0.3);
    TwistField tw = geometric_twist(g);
    for (double eps : {1.0, 0.25}) {
        Solution s = solve_ma(g, tw, eps);
        RealField oracle = semilinear_oracle(g, tw, eps);
        double worst = 0;
        for (std::size_t i = 0; i < oracle.size(); ++i)
            worst = std::max(worst, std::abs(s.u[i] - oracle[i]));
        CHECK(worst < 1e-7);
    }
}

TEST_CASE("nonconstant synthetic psi twist still solves to tolerance") {
    MetricField g = flat1(32);
    auto lat = g.lat();
    RealField psi(lat);
    for (std::size_t i = 0; i < psi.size(); ++i)
        psi[i] = 0.02 * std::sin(kTwoPi * lat->coord(i, 0));
    TwistField tw = synthetic_twist(g, 0.4, psi);
    Solution s = solve_ma(g, tw, 0.25);
    CHECK(s.residual_sup < 1e-10);
    CHECK(ma_residual_sup(s, g) < 1e-10);
    // mass is still cohomological: (eps + lambda) * Vol for n = 1
    CHECK(mass_integral(s.u, g) == doctest::Approx(0.65).epsilon(1e-9));
}

TEST_CASE("sup bound from the maximum principle holds when available") {
    MetricField g = flat1();
    TwistField tw = synthetic_twist(g, 0.7, std::nullopt);
    Solution s = solve_ma(g, tw, 0.5);
    REQUIRE(s.sup_bound.has_value());
    CHECK(s.sup_u <= *s.sup_bound + 1e-9);
}

TEST_CASE("sweep is monotone in epsilon and classifies closed forms") {
    MetricField g = flat1();
    SolverOptions opts;

    TwistField flat_tw = geometric_twist(g);
    SweepRecord collapsing = epsilon_sweep(g, flat_tw, geometric_schedule(1, 0.5, 10), opts);
    CHECK(collapsing.classify.classification == Classification::Collapsing);
    CHECK(std::abs(collapsing.classify.extrapolated_mass0) < 1e-10);

    TwistField lam_tw = synthetic_twist(g, 0.7, std::nullopt);
    SweepRecord big = epsilon_sweep(g, lam_tw, geometric_schedule(1, 0.5, 10), opts);
    CHECK(big.classify.classification == Classification::BigLimit);
    CHECK(big.classify.extrapolated_mass0 == doctest::Approx(0.7).epsilon(1e-6));

    for (const SweepRecord* rec : {&collapsing, &big})
        for (std::size_t k = 1; k < rec->solutions.size(); ++k)
            for (std::size_t i = 0; i < rec->solutions[k].u.size(); ++i)
                CHECK(rec->solutions[k].u[i] <= rec->solutions[k - 1].u[i] + 1e-8);
}

TEST_CASE("epsilon = 0 reference bounds the sweep from below") {
    MetricField g = flat1();
    TwistField tw = synthetic_twist(g, 0.7, std::nullopt);
    Solution limit = solve_limit(g, tw);
    SweepRecord sweep = epsilon_sweep(g, tw, geometric_schedule(1, 0.5, 12), {});
    for (const auto& s : sweep.solutions)
        for (std::size_t i = 0; i < s.u.size(); ++i)
            CHECK(s.u[i] >= limit.u[i] - 1e-8);
}

TEST_CASE("trace diagnostics: eigenvalue route equals inverse route") {
    MetricField g = conformal(32, 0.25);
    TwistField tw = geometric_twist(g);
    Solution s = solve_ma(g, tw, 0.5);
    TraceDiagnostics tr = trace_diagnostics(s.omega_eps, g);
    RealField s2 = trace_via_inverse(s.omega_eps, g);
    double worst = 0;
    for (std::size_t i = 0; i < s2.size(); ++i)
        worst = std::max(worst, std::abs(tr.s[i] - s2[i]));
    CHECK(worst < 1e-9);
    // n = 1 trace identity: T = -u exactly at a converged solution
    for (std::size_t i = 0; i < s2.size(); ++i)
        CHECK(std::abs(tr.t[i] + s.u[i]) < 1e-9);
}

TEST_CASE("n = 2 trace margin carries the strict log 2") {
    MetricField g = flat2();
    TwistField tw = synthetic_twist(g, 0.3, std::nullopt);
    Solution s = solve_ma(g, tw, 0.25);
    TraceDiagnostics tr = trace_diagnostics(s.omega_eps, g);
    for (std::size_t i = 0; i < tr.t.size(); ++i)
        CHECK(tr.t[i] + s.u[i] / 2 == doctest::Approx(std::log(2.0)).epsilon(1e-9));
}

TEST_CASE("mass polynomial is cohomological: degree n with exact coefficients") {
    MetricField g1 = flat1();
    TwistField tw1 = synthetic_twist(g1, 0.7, std::nullopt);
    auto p1 = mass_polynomial(g1, tw1);
    REQUIRE(p1.size() == 2);
    CHECK(p1[0] == doctest::Approx(0.7).epsilon(1e-12));
    CHECK(p1[1] == doctest::Approx(1.0).epsilon(1e-12));

    MetricField g2 = flat2();
    TwistField tw2 = synthetic_twist(g2, 0.7, std::nullopt);
    auto p2 = mass_polynomial(g2, tw2);
    REQUIRE(p2.size() == 3);
    CHECK(p2[0] == doctest::Approx(0.49).epsilon(1e-12));
    CHECK(p2[1] == doctest::Approx(1.4).epsilon(1e-12));
    CHECK(p2[2] == doctest::Approx(1.0).epsilon(1e-12));

    // geometric twist on a conformal torus: c1 = 0, mass stays eps * Vol_omega
    MetricField gc = conformal(32, 0.3);
    TwistField twc = geometric_twist(gc);
    auto pc = mass_polynomial(gc, twc);
    CHECK(std::abs(pc[0]) < 1e-10);
    RealField det_g(gc.lat());
    for (std::size_t i = 0; i < det_g.size(); ++i)
        det_g[i] = herm_det(load_herm(gc.g, i), 1);
    CHECK(pc[1] == doctest::Approx(integrate(det_g)).epsilon(1e-12));
}

TEST_CASE("warm start converges to the same solution as cold start") {
    MetricField g = conformal(32, 0.3);
    TwistField tw = geometric_twist(g);
    Solution a = solve_ma(g, tw, 0.5);
    Solution warm_src = solve_ma(g, tw, 1.0);
    Solution b = solve_ma(g, tw, 0.5, {}, &warm_src.u);
    double worst = 0;
    for (std::size_t i = 0; i < a.u.size(); ++i)
        worst = std::max(worst, std::abs(a.u[i] - b.u[i]));
    CHECK(worst < 1e-9);
}

TEST_CASE("classification falls back to Indeterminate between thresholds") {
    std::vector<double> eps{1, 0.5, 0.25, 0.125};
    std::vector<double> mass;
    for (double e : eps) mass.push_back(3e-7 + e);  // constant term between t/10 and t
    ClassifyResult r = classify_sweep(eps, mass, 1, 1e-6);
    CHECK(r.classification == Classification::Indeterminate);
}
