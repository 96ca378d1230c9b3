#pragma once

#include <optional>

#include "klab/metric.hpp"
#include "klab/twist.hpp"

namespace klab {

struct SolverOptions {
    double tolerance = 1e-10;    // sup-norm residual target
    int max_newton = 50;
    int max_krylov = 2000;
    double positivity_tol = 1e-10;  // min eigenvalue of omega_eps
};

// one solve of the continuity family at a fixed epsilon
struct Solution {
    double epsilon = 0;
    RealField u;
    HermField omega_eps;  // eps*g + rho + dds(u)
    double residual_sup = 0;
    int newton_iterations = 0;
    double sup_u = 0, inf_u = 0;
    // max over nodes of log det(g^{-1}(eps*g + rho)), when eps*g + rho is
    // positive at every node; the maximum-principle bound on sup u
    std::optional<double> sup_bound;
};

// solves (eps*g + rho + dds(u))^n = e^u * det(g)-volume, in log-determinant
// form, by Newton with a flat-preconditioned BiCGStab inner solve
Solution solve_ma(const MetricField& g, const TwistField& rho, double eps,
                  const SolverOptions& opts = {},
                  const RealField* warm_start = nullptr);

// the eps = 0 reference solve; requires rho pointwise positive definite
Solution solve_limit(const MetricField& g, const TwistField& rho,
                     const SolverOptions& opts = {});

// independent residual pass: sup-norm of log det(omega_eps) - log det g - u
double ma_residual_sup(const Solution& sol, const MetricField& g);

}  // namespace klab
