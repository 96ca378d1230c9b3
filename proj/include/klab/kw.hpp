#pragma once

#include <optional>

#include "klab/ma_solver.hpp"

namespace klab {

// trace Laplacian tr_omega i d dbar h = g^{i jbar} d_i d_jbar h
RealField weighted_laplacian(const HermField& omega, const RealField& h);

// weighted average of M against the omega_eps volume:
// integral(M e^u dV) / integral(e^u dV)
double mbar(const Solution& sol, const RealField& m, const MetricField& g);

// u - sup u (so sup of the result is exactly 0)
RealField normalize_sup(const RealField& u);

struct WeightedPoissonResult {
    RealField f;               // inf-normalized: inf f = 0 exactly
    double projected_mean = 0; // compatibility projection magnitude
    double residual_sup = 0;
};

// f with Delta_omega f = M - mbar_eps and inf f = 0; the weighted mean of the
// rhs is projected to zero and the projection magnitude reported
WeightedPoissonResult solve_weighted_poisson(const HermField& omega, const RealField& m,
                                             double mbar_eps, double tol = 1e-9,
                                             int max_krylov = 4000);

struct Supersolution {
    double a, b;       // concrete margins: A = 2/mbar0, B = log A + 1
    RealField phi_plus;  // A*f + B
};

// throws ConfigError when mbar0 <= 0 (machinery inapplicable)
Supersolution supersolution(const RealField& f, double mbar0);

struct ComparisonReport {
    bool hypotheses_ok = false;  // M >= 0 everywhere, max M > 0
    bool is_sub = false;         // min residual_minus >= -tol
    bool is_super = false;       // max residual_plus <= tol
    double min_residual_minus = 0;
    double max_residual_plus = 0;
    double ordering_margin = 0;  // min(phi_plus - phi_minus)
    std::size_t margin_node = 0;
};

// residuals of Delta phi = M e^phi - 1 for a sub/super pair
ComparisonReport check_comparison(const RealField& phi_minus, const RealField& phi_plus,
                                  const RealField& m, const HermField& omega,
                                  double tol = 1e-8);

// min over nodes of Delta_omega T - (M + eps/n) e^T + 1 with M = (n+1)/(2n) kappa
double check_diff_inequality(const Solution& sol, const RealField& t,
                             const RealField& kappa, const MetricField& g);

struct GuenanciaReport {
    double lhs = 0;    // integral(M e^T e^u dV)
    double rhs = 0;    // integral(e^u dV)
    double c_eps = 0;  // inf e^{-u/n}
    bool holds = false;
};

GuenanciaReport guenancia_check(const Solution& sol, const RealField& t,
                                const RealField& m, const MetricField& g,
                                double tol = 1e-10);

}  // namespace klab
