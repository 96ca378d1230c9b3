#include "klab/metric.hpp"

#include <cmath>

#include "klab/errors.hpp"
#include "klab/spectral.hpp"

namespace klab {

MetricField flat_metric(const LatticePtr& lat, const Herm2& background) {
    const int n = lat->dim_c();
    if (herm_min_eigenvalue(background, n) <= kMetricPositivityTol)
        throw ConfigError("flat_metric: background is not positive definite");
    MetricField m;
    m.g = HermField(lat, n);
    m.background = background;
    m.provenance = MetricProvenance::Flat;
    for (std::size_t node = 0; node < lat->nodes(); ++node)
        store_herm(m.g, node, background, n);
    return m;
}

MetricField metric_from_potential(const LatticePtr& lat, const Herm2& background,
                                  const RealField& phi) {
    const int n = lat->dim_c();
    if (herm_min_eigenvalue(background, n) <= kMetricPositivityTol)
        throw ConfigError("metric_from_potential: background is not positive definite");
    MetricField m;
    m.g = dds(phi);
    m.background = background;
    m.provenance = MetricProvenance::Potential;
    for (std::size_t node = 0; node < lat->nodes(); ++node) {
        Herm2 h = load_herm(m.g, node);
        h.h00 += background.h00;
        h.h11 += background.h11;
        h.h01 += background.h01;
        store_herm(m.g, node, h, n);
    }
    auto [emin, at] = herm_min_eigenvalue_global(m.g);
    if (emin <= kMetricPositivityTol)
        throw ConfigError("metric_from_potential: positivity failure, min eigenvalue " +
                          std::to_string(emin) + " at node " + std::to_string(at));
    return m;
}

MetricField conformal_metric(const RealField& log_density) {
    const LatticePtr& lat = log_density.lat;
    if (lat->dim_c() != 1)
        throw ConfigError("conformal_metric: only defined for dim_c = 1");
    MetricField m;
    m.g = HermField(lat, 1);
    m.background = Herm2{1, 0, 0};
    m.provenance = MetricProvenance::Conformal;
    for (std::size_t node = 0; node < lat->nodes(); ++node)
        m.g.at(node, 0, 0) = std::exp(log_density[node]);
    return m;
}

MetricField product_metric(const MetricField& m1, const MetricField& m2,
                           const LatticePtr& product_lat) {
    if (m1.n() != 1 || m2.n() != 1)
        throw ConfigError("product_metric: both factors must have dim_c = 1");
    if (product_lat->dim_c() != 2)
        throw ConfigError("product_metric: product lattice must have dim_c = 2");
    for (int a = 0; a < 2; ++a) {
        if (product_lat->resolution(a) != m1.lat()->resolution(a) ||
            product_lat->resolution(2 + a) != m2.lat()->resolution(a) ||
            product_lat->period(a) != m1.lat()->period(a) ||
            product_lat->period(2 + a) != m2.lat()->period(a))
            throw ConfigError("product_metric: product lattice does not match the factors");
    }
    MetricField m;
    m.g = HermField(product_lat, 2);
    m.background = Herm2{m1.background.h00, m2.background.h00, 0};
    m.provenance = MetricProvenance::Product;
    const std::size_t n2 = m2.lat()->nodes();
    for (std::size_t node = 0; node < product_lat->nodes(); ++node) {
        const std::size_t i1 = node / n2;
        const std::size_t i2 = node % n2;
        Herm2 h;
        h.h00 = m1.g.at(i1, 0, 0).real();
        h.h11 = m2.g.at(i2, 0, 0).real();
        h.h01 = 0;
        store_herm(m.g, node, h, 2);
    }
    return m;
}

MetricField scale_metric(const MetricField& m, double c) {
    if (!(c > 0)) throw ConfigError("scale_metric: factor must be positive");
    MetricField out = m;
    for (auto& z : out.g.a) z *= c;
    out.background.h00 *= c;
    out.background.h11 *= c;
    out.background.h01 *= c;
    return out;
}

}  // namespace klab
