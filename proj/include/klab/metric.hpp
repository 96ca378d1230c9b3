#pragma once

#include <string>

#include "klab/herm.hpp"

namespace klab {

enum class MetricProvenance { Flat, Conformal, Potential, Product };

// Kahler metric in coordinates: node-indexed positive-definite Hermitian
// g_{i jbar}. Only the constructors below exist, so the associated (1,1)-form
// is d-closed by construction.
struct MetricField {
    HermField g;
    MetricProvenance provenance = MetricProvenance::Flat;
    // constant background (Flat/Potential); h00 = 1 for Conformal
    Herm2 background;

    int n() const { return g.n; }
    const LatticePtr& lat() const { return g.lat; }
};

inline const char* provenance_name(MetricProvenance p) {
    switch (p) {
        case MetricProvenance::Flat: return "flat";
        case MetricProvenance::Conformal: return "conformal";
        case MetricProvenance::Potential: return "potential";
        case MetricProvenance::Product: return "product";
    }
    return "?";
}

// minimum eigenvalue accepted for a valid metric
constexpr double kMetricPositivityTol = 1e-10;

// constant background metric
MetricField flat_metric(const LatticePtr& lat, const Herm2& background);
// g = background + dds(phi); throws with the worst node when positivity fails
MetricField metric_from_potential(const LatticePtr& lat, const Herm2& background,
                                  const RealField& phi);
// n = 1 only: g = e^f
MetricField conformal_metric(const RealField& log_density);
// block-diagonal metric on the product lattice of two n = 1 factors
MetricField product_metric(const MetricField& m1, const MetricField& m2,
                           const LatticePtr& product_lat);

// uniform positive scaling c*g (scaling covariance checks)
MetricField scale_metric(const MetricField& m, double c);

}  // namespace klab
