#pragma once

#include <string>
#include <vector>

#include "klab/ma_solver.hpp"

namespace klab {

// trace diagnostics of a converged solution:
// S = tr_{omega_eps} omega = sum 1/lambda_i over the generalized eigenvalues
// lambda_i of omega_eps against omega; T = log S
struct TraceDiagnostics {
    RealField s;
    RealField t;
    RealField lambda_min;  // smallest generalized eigenvalue per node
};

TraceDiagnostics trace_diagnostics(const HermField& omega_eps, const MetricField& g);
// direct matrix route tr(omega_eps^{-1} omega); oracle for the eigenvalue sum
RealField trace_via_inverse(const HermField& omega_eps, const MetricField& g);

// integral(e^u dV_omega), with dV_omega density det g
double mass_integral(const RealField& u, const MetricField& g);
// internal cross-check: integral(det omega_eps)
double mass_determinant_route(const HermField& omega_eps);

// coefficients c[0..n] of the degree-n polynomial
// (eps [omega] + [rho])^n = sum_j c[j] eps^j, from quadratures of wedge
// densities of the fixed representatives
std::vector<double> mass_polynomial(const MetricField& g, const TwistField& rho);
double eval_polynomial(const std::vector<double>& coeffs, double eps);

enum class Classification { BigLimit, Collapsing, Indeterminate };
inline const char* classification_name(Classification c) {
    switch (c) {
        case Classification::BigLimit: return "BigLimit";
        case Classification::Collapsing: return "Collapsing";
        case Classification::Indeterminate: return "Indeterminate";
    }
    return "?";
}

struct ClassifyResult {
    Classification classification;
    double extrapolated_mass0;  // constant term of the fit
    double threshold;
    std::vector<double> fit_coefficients;  // c[0..n]
};

// least-squares fit of the known polynomial form to (epsilon, mass) pairs;
// constant term > threshold => BigLimit, < threshold/10 => Collapsing
ClassifyResult classify_sweep(const std::vector<double>& epsilons,
                              const std::vector<double>& masses, int n, double threshold);

}  // namespace klab
