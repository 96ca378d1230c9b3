#include "klab/diagnostics.hpp"

#include <cmath>

#include "klab/errors.hpp"
#include "klab/simd/kernels.hpp"

namespace klab {

TraceDiagnostics trace_diagnostics(const HermField& omega_eps, const MetricField& g) {
    const int n = g.n();
    TraceDiagnostics out;
    out.s = RealField(g.lat());
    out.t = RealField(g.lat());
    out.lambda_min = RealField(g.lat());
    for (std::size_t node = 0; node < out.s.size(); ++node) {
        const Herm2 oe = load_herm(omega_eps, node);
        const Herm2 gm = load_herm(g.g, node);
        const auto lam = herm_gen_eigenvalues(oe, gm, n);
        if (!(lam[0] > 0))
            throw SolverError("trace_diagnostics: omega_eps not positive at node " +
                              std::to_string(node));
        double s = 1.0 / lam[0];
        if (n == 2) s += 1.0 / lam[1];
        out.s[node] = s;
        out.t[node] = std::log(s);
        out.lambda_min[node] = lam[0];
    }
    return out;
}

RealField trace_via_inverse(const HermField& omega_eps, const MetricField& g) {
    RealField out(g.lat());
    for (std::size_t node = 0; node < out.size(); ++node)
        out[node] = herm_trace_product_inv(load_herm(omega_eps, node),
                                           load_herm(g.g, node), g.n());
    return out;
}

double mass_integral(const RealField& u, const MetricField& g) {
    RealField density(g.lat());
    for (std::size_t node = 0; node < u.size(); ++node)
        density[node] = std::exp(u[node]) * herm_det(load_herm(g.g, node), g.n());
    return integrate(density);
}

double mass_determinant_route(const HermField& omega_eps) {
    RealField density(omega_eps.lat);
    for (std::size_t node = 0; node < density.size(); ++node)
        density[node] = herm_det(load_herm(omega_eps, node), omega_eps.n);
    return integrate(density);
}

std::vector<double> mass_polynomial(const MetricField& g, const TwistField& rho) {
    const int n = g.n();
    const LatticePtr& lat = g.lat();
    if (n == 1) {
        RealField dg(lat), dr(lat);
        for (std::size_t node = 0; node < dg.size(); ++node) {
            dg[node] = g.g.at(node, 0, 0).real();
            dr[node] = rho.rho.at(node, 0, 0).real();
        }
        return {integrate(dr), integrate(dg)};
    }
    RealField det_g(lat), wedge(lat), det_r(lat);
    for (std::size_t node = 0; node < det_g.size(); ++node) {
        const Herm2 a = load_herm(g.g, node);
        const Herm2 b = load_herm(rho.rho, node);
        det_g[node] = herm_det(a, 2);
        wedge[node] = herm_wedge_density(a, b);
        det_r[node] = herm_det(b, 2);
    }
    return {integrate(det_r), integrate(wedge), integrate(det_g)};
}

double eval_polynomial(const std::vector<double>& coeffs, double eps) {
    double v = 0;
    for (std::size_t j = coeffs.size(); j-- > 0;) v = v * eps + coeffs[j];
    return v;
}

ClassifyResult classify_sweep(const std::vector<double>& epsilons,
                              const std::vector<double>& masses, int n, double threshold) {
    if (epsilons.size() < 4 || epsilons.size() != masses.size())
        throw ConfigError("classify_sweep: need at least 4 sweep entries");
    const int dim = n + 1;
    // normal equations for the Vandermonde least-squares fit
    std::vector<double> ata(dim * dim, 0.0), atb(dim, 0.0);
    for (std::size_t k = 0; k < epsilons.size(); ++k) {
        std::vector<double> row(dim);
        row[0] = 1.0;
        for (int j = 1; j < dim; ++j) row[j] = row[j - 1] * epsilons[k];
        for (int i = 0; i < dim; ++i) {
            atb[i] += row[i] * masses[k];
            for (int j = 0; j < dim; ++j) ata[i * dim + j] += row[i] * row[j];
        }
    }
    // Gaussian elimination with partial pivoting (dim <= 3)
    std::vector<double> c(atb);
    for (int col = 0; col < dim; ++col) {
        int piv = col;
        for (int r = col + 1; r < dim; ++r)
            if (std::abs(ata[r * dim + col]) > std::abs(ata[piv * dim + col])) piv = r;
        if (piv != col) {
            for (int j = 0; j < dim; ++j) std::swap(ata[col * dim + j], ata[piv * dim + j]);
            std::swap(c[col], c[piv]);
        }
        const double d = ata[col * dim + col];
        if (d == 0) throw SolverError("classify_sweep: singular fit system");
        for (int r = 0; r < dim; ++r) {
            if (r == col) continue;
            const double fac = ata[r * dim + col] / d;
            for (int j = col; j < dim; ++j) ata[r * dim + j] -= fac * ata[col * dim + j];
            c[r] -= fac * c[col];
        }
    }
    for (int i = 0; i < dim; ++i) c[i] /= ata[i * dim + i];

    ClassifyResult out;
    out.fit_coefficients = c;
    out.extrapolated_mass0 = c[0];
    out.threshold = threshold;
    if (c[0] > threshold)
        out.classification = Classification::BigLimit;
    else if (c[0] < threshold / 10)
        out.classification = Classification::Collapsing;
    else
        out.classification = Classification::Indeterminate;
    return out;
}

}  // namespace klab
