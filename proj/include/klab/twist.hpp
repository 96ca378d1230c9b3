#pragma once

#include <optional>

#include "klab/metric.hpp"

namespace klab {

enum class TwistMode { Geometric, Synthetic };

// The d-closed twist form rho entering the continuity family:
// geometric rho = -Ric(omega), or synthetic rho = lambda * background + dds(psi).
// chi is a zero-mean potential with rho = lambda * background + dds(chi);
// it exists for both modes and gives exact cold starts.
struct TwistField {
    HermField rho;
    TwistMode mode = TwistMode::Geometric;
    double lambda = 0;
    RealField chi;

    const LatticePtr& lat() const { return rho.lat; }
};

TwistField geometric_twist(const MetricField& g);
TwistField synthetic_twist(const MetricField& g, double lambda,
                           const std::optional<RealField>& psi);

}  // namespace klab
