#include "klab/twist.hpp"

#include <cmath>

#include "klab/curvature.hpp"
#include "klab/errors.hpp"
#include "klab/spectral.hpp"

namespace klab {

TwistField geometric_twist(const MetricField& g) {
    TwistField t;
    t.mode = TwistMode::Geometric;
    t.lambda = 0;
    t.rho = ricci_form(g);
    for (auto& z : t.rho.a) z = -z;
    // -Ric = dds(log det g); normalize the potential to zero mean
    RealField logdet(g.lat());
    for (std::size_t node = 0; node < logdet.size(); ++node)
        logdet[node] = std::log(herm_det(load_herm(g.g, node), g.n()));
    const double m = mean(logdet);
    for (auto& x : logdet.v) x -= m;
    t.chi = logdet;
    return t;
}

TwistField synthetic_twist(const MetricField& g, double lambda,
                           const std::optional<RealField>& psi) {
    if (lambda < 0) throw ConfigError("synthetic_twist: lambda must be nonnegative");
    TwistField t;
    t.mode = TwistMode::Synthetic;
    t.lambda = lambda;
    if (psi) {
        t.chi = *psi;
        const double m = mean(t.chi);
        for (auto& x : t.chi.v) x -= m;
        t.rho = dds(t.chi);
    } else {
        t.chi = RealField(g.lat());
        t.rho = HermField(g.lat(), g.n());
    }
    for (std::size_t node = 0; node < g.lat()->nodes(); ++node) {
        Herm2 m2 = load_herm(t.rho, node);
        m2.h00 += lambda * g.background.h00;
        m2.h11 += lambda * g.background.h11;
        m2.h01 += lambda * g.background.h01;
        store_herm(t.rho, node, m2, g.n());
    }
    return t;
}

}  // namespace klab
