#include "klab/ma_solver.hpp"

#include <cmath>
#include <limits>

#include "klab/errors.hpp"
#include "klab/fft.hpp"
#include "klab/kw.hpp"
#include "klab/spectral.hpp"
#include "krylov.hpp"

namespace klab {
namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

HermField assemble_omega(const MetricField& g, const TwistField& rho, double eps,
                         const RealField& u) {
    HermField h = dds(u);
    for (std::size_t i = 0; i < h.a.size(); ++i) h.a[i] += eps * g.g.a[i] + rho.rho.a[i];
    return h;
}

// F(u) = log det(omega_eps) - log det g - u; requires omega positive
bool residual(const HermField& omega, const MetricField& g, const RealField& u,
              double pos_tol, RealField& out) {
    const int n = g.n();
    for (std::size_t node = 0; node < u.size(); ++node) {
        const Herm2 h = load_herm(omega, node);
        if (herm_min_eigenvalue(h, n) <= pos_tol) return false;
        out[node] = std::log(herm_det(h, n)) - std::log(herm_det(load_herm(g.g, node), n)) -
                    u[node];
    }
    return true;
}

// spectral inverse of (c * flat-ddbar-laplacian - 1)
struct FlatShiftedPreconditioner {
    const Lattice* lat;
    double c;
    std::vector<std::vector<double>> k;  // deriv frequencies per axis

    FlatShiftedPreconditioner(const Lattice& l, double c_) : lat(&l), c(c_) {
        const int d = l.real_dim();
        k.resize(d);
        for (int a = 0; a < d; ++a) {
            const int n = l.resolution(a);
            k[a].resize(n);
            for (int m = 0; m < n; ++m) {
                int ms = m < n / 2 ? m : m - n;
                if (m == n / 2) ms = 0;
                k[a][m] = kTwoPi * ms / l.period(a);
            }
        }
    }

    void apply(const detail::Vec& in, detail::Vec& out) const {
        std::vector<cdouble> hat(in.size());
        for (std::size_t i = 0; i < in.size(); ++i) hat[i] = in[i];
        const Fft& fft = Fft::get(*lat);
        fft.forward(hat);
        const int d = lat->real_dim();
        std::vector<int> m(d, 0);
        for (std::size_t idx = 0; idx < hat.size(); ++idx) {
            double s = 0;
            for (int a = 0; a < d; ++a) s += k[a][m[a]] * k[a][m[a]];
            hat[idx] /= (c * (-0.25 * s) - 1.0);
            for (int a = d - 1; a >= 0; --a) {
                if (++m[a] < lat->resolution(a)) break;
                m[a] = 0;
            }
        }
        fft.backward(hat);
        out.resize(in.size());
        for (std::size_t i = 0; i < in.size(); ++i) out[i] = hat[i].real();
    }
};

Solution newton_solve(const MetricField& g, const TwistField& rho, double eps,
                      const SolverOptions& opts, const RealField& start) {
    const std::size_t nn = g.lat()->nodes();
    const int n = g.n();

    RealField u = start;
    HermField omega = assemble_omega(g, rho, eps, u);
    RealField f(g.lat());
    if (!residual(omega, g, u, opts.positivity_tol, f)) {
        // warm starts can lose positivity after a large epsilon drop;
        // the cold start eps*g + lambda*G0 is positive by construction
        RealField cold(g.lat());
        const double shift = n * std::log(eps + std::max(rho.lambda, 0.0));
        for (std::size_t i = 0; i < nn; ++i) cold[i] = -rho.chi[i] + shift;
        u = cold;
        omega = assemble_omega(g, rho, eps, u);
        if (!residual(omega, g, u, opts.positivity_tol, f))
            throw SolverError("solve_ma: initial iterate loses positivity at eps = " +
                              std::to_string(eps));
    }
    double res = sup_norm(f);

    int iterations = 0;
    while (res > opts.tolerance) {
        if (++iterations > opts.max_newton)
            throw SolverError("solve_ma: Newton stagnation after " +
                              std::to_string(opts.max_newton) + " iterations (residual " +
                              std::to_string(res) + ") at eps = " + std::to_string(eps));

        // mean inverse-metric scale for the flat preconditioner
        double trace_sum = 0;
        for (std::size_t node = 0; node < nn; ++node)
            trace_sum += herm_trace(herm_inverse(load_herm(omega, node), n), n);
        const double c = trace_sum / (static_cast<double>(nn) * n);
        FlatShiftedPreconditioner prec(*g.lat(), c);

        auto apply_a = [&](const detail::Vec& in, detail::Vec& out) {
            RealField x(g.lat());
            x.v = in;
            HermField hess = dds(x);
            out.resize(in.size());
            for (std::size_t node = 0; node < nn; ++node)
                out[node] = herm_trace_product_inv(load_herm(omega, node),
                                                   load_herm(hess, node), n) -
                            in[node];
        };
        auto apply_m = [&](const detail::Vec& in, detail::Vec& out) { prec.apply(in, out); };

        detail::Vec rhs(nn);
        for (std::size_t i = 0; i < nn; ++i) rhs[i] = -f[i];
        detail::Vec delta(nn, 0.0);
        const double rtol = std::max(1e-12, std::min(1e-2, 1e-2 * res));
        detail::bicgstab(apply_a, apply_m, rhs, delta, rtol, opts.max_krylov);

        // a step at roundoff scale means the residual sits on the spectral
        // noise floor of log det(dds u); keep the iterate instead of grinding
        // the line search against noise
        double step_sup = 0;
        for (double v : delta) step_sup = std::max(step_sup, std::abs(v));
        if (step_sup <= 1e-12 * (1.0 + sup_norm(u))) break;

        // backtracking: halve the step until the residual decreases and
        // positivity holds
        bool accepted = false;
        RealField trial_f(g.lat());
        for (double alpha = 1.0; alpha >= std::ldexp(1.0, -30); alpha *= 0.5) {
            RealField trial_u = u;
            for (std::size_t i = 0; i < nn; ++i) trial_u[i] += alpha * delta[i];
            HermField trial_omega = assemble_omega(g, rho, eps, trial_u);
            if (!residual(trial_omega, g, trial_u, opts.positivity_tol, trial_f)) continue;
            const double trial_res = sup_norm(trial_f);
            if (trial_res < res) {
                u = std::move(trial_u);
                omega = std::move(trial_omega);
                f = trial_f;
                res = trial_res;
                accepted = true;
                break;
            }
        }
        if (!accepted)
            throw SolverError("solve_ma: unrecoverable positivity loss / no descent at eps = " +
                              std::to_string(eps));
    }

    Solution sol;
    sol.epsilon = eps;
    sol.u = std::move(u);
    sol.omega_eps = std::move(omega);
    sol.residual_sup = res;
    sol.newton_iterations = iterations;
    const Extrema ex = extrema(sol.u);
    sol.sup_u = ex.max;
    sol.inf_u = ex.min;

    // a-priori bound from the twisted background, when it is positive
    bool bg_positive = true;
    double bound = -std::numeric_limits<double>::infinity();
    for (std::size_t node = 0; node < nn; ++node) {
        Herm2 b = load_herm(rho.rho, node);
        const Herm2 gm = load_herm(g.g, node);
        b.h00 += eps * gm.h00;
        b.h11 += eps * gm.h11;
        b.h01 += eps * gm.h01;
        if (herm_min_eigenvalue(b, n) <= 0) { bg_positive = false; break; }
        bound = std::max(bound, std::log(herm_det(b, n)) - std::log(herm_det(gm, n)));
    }
    if (bg_positive) sol.sup_bound = bound;
    return sol;
}

}  // namespace

Solution solve_ma(const MetricField& g, const TwistField& rho, double eps,
                  const SolverOptions& opts, const RealField* warm_start) {
    if (!(eps > 0)) throw ConfigError("solve_ma: eps must be positive");
    RealField start;
    if (warm_start) {
        start = *warm_start;
    } else {
        start = RealField(g.lat());
        const double shift = g.n() * std::log(eps + std::max(rho.lambda, 0.0));
        for (std::size_t i = 0; i < start.size(); ++i) start[i] = -rho.chi[i] + shift;
    }
    return newton_solve(g, rho, eps, opts, start);
}

Solution solve_limit(const MetricField& g, const TwistField& rho, const SolverOptions& opts) {
    auto [emin, at] = herm_min_eigenvalue_global(rho.rho);
    if (emin <= kMetricPositivityTol)
        throw ConfigError("solve_limit: rho is not pointwise positive (min eigenvalue " +
                          std::to_string(emin) + " at node " + std::to_string(at) + ")");
    RealField start(g.lat());
    const double shift = g.n() * std::log(rho.lambda);
    for (std::size_t i = 0; i < start.size(); ++i) start[i] = -rho.chi[i] + shift;
    return newton_solve(g, rho, 0.0, opts, start);
}

double ma_residual_sup(const Solution& sol, const MetricField& g) {
    double worst = 0;
    const int n = g.n();
    for (std::size_t node = 0; node < sol.u.size(); ++node) {
        const double r = std::log(herm_det(load_herm(sol.omega_eps, node), n)) -
                         std::log(herm_det(load_herm(g.g, node), n)) - sol.u[node];
        worst = std::max(worst, std::abs(r));
    }
    return worst;
}

}  // namespace klab
