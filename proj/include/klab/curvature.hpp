#pragma once

#include <array>

#include "klab/metric.hpp"

namespace klab {

// Chern curvature tensor R_{i jbar k lbar}, n^4 complex entries per node.
struct CurvatureField {
    LatticePtr lat;
    int n = 0;
    std::vector<cdouble> r;

    CurvatureField() = default;
    CurvatureField(LatticePtr l, int n_)
        : lat(std::move(l)), n(n_), r(lat->nodes() * n_ * n_ * n_ * n_) {}

    cdouble& at(std::size_t node, int i, int j, int k, int l) {
        return r[(((node * n + i) * n + j) * n + k) * n + l];
    }
    cdouble at(std::size_t node, int i, int j, int k, int l) const {
        return r[(((node * n + i) * n + j) * n + k) * n + l];
    }
};

// R_{i jbar k lbar} = -d_k d_lbar g_{i jbar} + g^{p qbar} d_k g_{i qbar} d_lbar g_{p jbar}
CurvatureField chern_curvature(const MetricField& g);

// worst violation of the Hermitian (R_{ijkl} = conj(R_{jilk})) and Kahler
// (R_{ijkl} = R_{kjil}) symmetries, relative to the largest tensor entry
struct CurvatureSymmetry {
    double hermitian;
    double kahler;
};
CurvatureSymmetry curvature_symmetry_defect(const CurvatureField& c);

// Ric_{i jbar} = -d_i d_jbar log det g
HermField ricci_form(const MetricField& g);
// same quantity through tr(g^{-1} dg); independent route for verification
HermField ricci_form_via_trace(const MetricField& g);

using Tangent = std::array<cdouble, 2>;  // only the first n entries used

// R(v, vbar, v, vbar) / |v|_g^4
double hsc(const CurvatureField& curv, const MetricField& g, std::size_t node,
           const Tangent& v);

struct ExtremizerOptions {
    int coarse_samples = 256;  // deterministic Fibonacci sampling of CP^1
    int refine_steps = 10;     // projected-gradient steps from the best sample
};

struct CurvatureReport {
    RealField kappa;  // -max over directions of HSC
    RealField m;      // (n+1)/(2n) * kappa
    std::vector<Tangent> argmax;
    double lipschitz;
    int argmax_sample_count = 0;
};

CurvatureReport kappa_field(const CurvatureField& curv, const MetricField& g,
                            const ExtremizerOptions& opts = {});

// smooth periodic bump below M, positive at x0; radius is halved until the
// upper bound verifies on the grid
RealField smooth_minorant(const RealField& m, std::size_t x0, double radius,
                          double level = 0.5);

}  // namespace klab
