#include "klab/curvature.hpp"

#include <algorithm>
#include <cmath>

#include "klab/errors.hpp"
#include "klab/spectral.hpp"

namespace klab {
namespace {

ComplexField metric_entry(const MetricField& g, int i, int j) {
    ComplexField f(g.lat());
    for (std::size_t node = 0; node < f.size(); ++node) f[node] = g.g.at(node, i, j);
    return f;
}

RealField log_det_field(const MetricField& g) {
    RealField out(g.lat());
    for (std::size_t node = 0; node < out.size(); ++node) {
        const double det = herm_det(load_herm(g.g, node), g.n());
        if (!(det > 0)) throw SolverError("log det of non-positive metric");
        out[node] = std::log(det);
    }
    return out;
}

}  // namespace

CurvatureField chern_curvature(const MetricField& g) {
    const int n = g.n();
    const std::size_t nodes = g.lat()->nodes();

    // D[k][i][q] = d_k g_{i qbar};  F[k][l][i][j] = d_lbar d_k g_{i jbar}
    std::vector<ComplexField> d(n * n * n);
    auto dref = [&](int k, int i, int q) -> ComplexField& { return d[(k * n + i) * n + q]; };
    for (int i = 0; i < n; ++i)
        for (int q = 0; q < n; ++q) {
            ComplexField e = metric_entry(g, i, q);
            for (int k = 0; k < n; ++k) dref(k, i, q) = wirtinger(e, k, false);
        }
    std::vector<ComplexField> f(n * n * n * n);
    auto fref = [&](int k, int l, int i, int j) -> ComplexField& {
        return f[((k * n + l) * n + i) * n + j];
    };
    for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                for (int l = 0; l < n; ++l) fref(k, l, i, j) = wirtinger(dref(k, i, j), l, true);

    CurvatureField out(g.lat(), n);
    for (std::size_t node = 0; node < nodes; ++node) {
        const Herm2 ginv = herm_inverse(load_herm(g.g, node), n);
        auto ginv_at = [&](int q, int p) -> cdouble {
            // (G^{-1})[q][p]
            if (n == 1) return ginv.h00;
            if (q == 0 && p == 0) return ginv.h00;
            if (q == 1 && p == 1) return ginv.h11;
            if (q == 0 && p == 1) return ginv.h01;
            return std::conj(ginv.h01);
        };
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                for (int k = 0; k < n; ++k)
                    for (int l = 0; l < n; ++l) {
                        cdouble second = 0;
                        for (int p = 0; p < n; ++p)
                            for (int q = 0; q < n; ++q)
                                second += ginv_at(q, p) * dref(k, i, q)[node] *
                                          std::conj(dref(l, j, p)[node]);
                        out.at(node, i, j, k, l) = -fref(k, l, i, j)[node] + second;
                    }
    }
    return out;
}

CurvatureSymmetry curvature_symmetry_defect(const CurvatureField& c) {
    double scale = 0, herm = 0, kahler = 0;
    const int n = c.n;
    for (std::size_t node = 0; node < c.lat->nodes(); ++node)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                for (int k = 0; k < n; ++k)
                    for (int l = 0; l < n; ++l) {
                        const cdouble r = c.at(node, i, j, k, l);
                        scale = std::max(scale, std::abs(r));
                        herm = std::max(herm,
                                        std::abs(r - std::conj(c.at(node, j, i, l, k))));
                        kahler = std::max(kahler, std::abs(r - c.at(node, k, j, i, l)));
                    }
    if (scale > 0) {
        herm /= scale;
        kahler /= scale;
    }
    return {herm, kahler};
}

HermField ricci_form(const MetricField& g) {
    HermField h = dds(log_det_field(g));
    for (auto& z : h.a) z = -z;
    return h;
}

HermField ricci_form_via_trace(const MetricField& g) {
    const int n = g.n();
    HermField out(g.lat(), n);
    for (int j = 0; j < n; ++j) {
        // t_j = tr(g^{-1} d_jbar g)
        ComplexField tj(g.lat());
        std::vector<ComplexField> dj(n * n);
        for (int q = 0; q < n; ++q)
            for (int p = 0; p < n; ++p)
                dj[q * n + p] = wirtinger(metric_entry(g, q, p), j, false);
        for (std::size_t node = 0; node < tj.size(); ++node) {
            const Herm2 ginv = herm_inverse(load_herm(g.g, node), n);
            cdouble t = 0;
            for (int p = 0; p < n; ++p)
                for (int q = 0; q < n; ++q) {
                    cdouble gi;
                    if (n == 1) gi = ginv.h00;
                    else if (q == 0 && p == 0) gi = ginv.h00;
                    else if (q == 1 && p == 1) gi = ginv.h11;
                    else if (q == 0 && p == 1) gi = ginv.h01;
                    else gi = std::conj(ginv.h01);
                    // (d_jbar g)[p][q] = conj(d_j g_{q pbar})
                    t += gi * std::conj(dj[q * n + p][node]);
                }
            tj[node] = t;
        }
        for (int i = 0; i < n; ++i) {
            ComplexField rij = wirtinger(tj, i, false);
            for (std::size_t node = 0; node < rij.size(); ++node)
                out.at(node, i, j) = -rij[node];
        }
    }
    return out;
}

double hsc(const CurvatureField& curv, const MetricField& g, std::size_t node,
           const Tangent& v) {
    const int n = curv.n;
    double vmag = 0;
    for (int i = 0; i < n; ++i) vmag += std::norm(v[i]);
    if (vmag == 0) throw ConfigError("hsc: zero tangent vector");
    cdouble num = 0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                for (int l = 0; l < n; ++l)
                    num += curv.at(node, i, j, k, l) * v[i] * std::conj(v[j]) * v[k] *
                           std::conj(v[l]);
    const Herm2 gm = load_herm(g.g, node);
    cdouble den = gm.h00 * std::norm(v[0]);
    if (n == 2)
        den += gm.h11 * std::norm(v[1]) + 2.0 * std::real(gm.h01 * v[0] * std::conj(v[1]));
    const double d = den.real();
    return num.real() / (d * d);
}

namespace {

// deterministic Fibonacci lattice on S^2 = CP^1
Tangent cp1_direction(int s, int total) {
    const double z = 1.0 - 2.0 * (s + 0.5) / total;
    const double theta = std::acos(std::clamp(z, -1.0, 1.0));
    const double phi = s * 2.399963229728653;  // golden angle
    return {std::cos(theta / 2),
            cdouble(std::sin(theta / 2) * std::cos(phi), std::sin(theta / 2) * std::sin(phi))};
}

struct QuarticEval {
    double value;
    Tangent grad;  // d value / d conj(v)
};

QuarticEval eval_with_grad(const CurvatureField& curv, const MetricField& g,
                           std::size_t node, const Tangent& v) {
    const int n = 2;
    cdouble num = 0;
    Tangent dnum{0, 0};
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k)
            for (int l = 0; l < n; ++l) {
                const cdouble base = v[i] * v[k] * std::conj(v[l]);
                for (int j = 0; j < n; ++j) {
                    num += curv.at(node, i, j, k, l) * base * std::conj(v[j]);
                    dnum[j] += 2.0 * curv.at(node, i, j, k, l) * base;
                }
            }
    const Herm2 gm = load_herm(g.g, node);
    const double den = gm.h00 * std::norm(v[0]) + gm.h11 * std::norm(v[1]) +
                       2.0 * std::real(gm.h01 * v[0] * std::conj(v[1]));
    Tangent dden{gm.h00 * v[0] + std::conj(gm.h01) * v[1],
                 gm.h11 * v[1] + gm.h01 * v[0]};
    QuarticEval out;
    out.value = num.real() / (den * den);
    for (int m = 0; m < 2; ++m)
        out.grad[m] = (dnum[m] - 2.0 * (num.real() / den) * dden[m]) / (den * den);
    return out;
}

}  // namespace

CurvatureReport kappa_field(const CurvatureField& curv, const MetricField& g,
                            const ExtremizerOptions& opts) {
    const std::size_t nodes = curv.lat->nodes();
    const int n = curv.n;
    CurvatureReport rep;
    rep.kappa = RealField(curv.lat);
    rep.m = RealField(curv.lat);
    rep.argmax.resize(nodes, Tangent{1, 0});
    rep.argmax_sample_count = n == 1 ? 1 : opts.coarse_samples;

    if (n == 1) {
        for (std::size_t node = 0; node < nodes; ++node)
            rep.kappa[node] = -hsc(curv, g, node, Tangent{1, 0});
    } else {
        for (std::size_t node = 0; node < nodes; ++node) {
            Tangent best{1, 0};
            double bestq = eval_with_grad(curv, g, node, best).value;
            for (int s = 0; s < opts.coarse_samples; ++s) {
                const Tangent v = cp1_direction(s, opts.coarse_samples);
                const double q = hsc(curv, g, node, v);
                if (q > bestq) { bestq = q; best = v; }
            }
            Tangent v = best;
            for (int step = 0; step < opts.refine_steps; ++step) {
                const QuarticEval e = eval_with_grad(curv, g, node, v);
                // project out the complex-scaling direction
                cdouble overlap = std::conj(v[0]) * e.grad[0] + std::conj(v[1]) * e.grad[1];
                double vnorm2 = std::norm(v[0]) + std::norm(v[1]);
                Tangent gp{e.grad[0] - overlap / vnorm2 * v[0],
                           e.grad[1] - overlap / vnorm2 * v[1]};
                const double gnorm = std::sqrt(std::norm(gp[0]) + std::norm(gp[1]));
                if (gnorm == 0) break;
                const double vnorm = std::sqrt(vnorm2);
                bool improved = false;
                for (double t = 0.5; t > 1e-6; t *= 0.5) {
                    const double scale = t * vnorm / gnorm;
                    Tangent w{v[0] + scale * gp[0], v[1] + scale * gp[1]};
                    const double wn = std::sqrt(std::norm(w[0]) + std::norm(w[1]));
                    w[0] /= wn;
                    w[1] /= wn;
                    const double q = hsc(curv, g, node, w);
                    if (q > bestq) {
                        bestq = q;
                        v = w;
                        improved = true;
                        break;
                    }
                }
                if (!improved) break;
            }
            rep.kappa[node] = -bestq;
            rep.argmax[node] = v;
        }
    }

    const double factor = (n + 1) / (2.0 * n);
    for (std::size_t node = 0; node < nodes; ++node) rep.m[node] = factor * rep.kappa[node];
    rep.lipschitz = lipschitz_estimate(rep.m);
    return rep;
}

RealField smooth_minorant(const RealField& m, std::size_t x0, double radius, double level) {
    if (!(m[x0] > 0)) throw ConfigError("smooth_minorant: M(x0) must be positive");
    const Lattice& lat = *m.lat;
    const double peak = level * m[x0];
    for (int attempt = 0; attempt < 48; ++attempt, radius *= 0.5) {
        RealField out(m.lat);
        bool ok = true;
        for (std::size_t node = 0; node < m.size(); ++node) {
            double d2 = 0;
            for (int a = 0; a < lat.real_dim(); ++a) {
                double dx = std::abs(lat.coord(node, a) - lat.coord(x0, a));
                dx = std::min(dx, lat.period(a) - dx);
                d2 += dx * dx;
            }
            const double s2 = d2 / (radius * radius);
            const double val = s2 < 1.0 ? peak * std::exp(1.0 - 1.0 / (1.0 - s2)) : 0.0;
            if (val > m[node]) { ok = false; break; }
            out[node] = val;
        }
        if (ok) return out;
    }
    throw SolverError("smooth_minorant: no admissible radius found");
}

}  // namespace klab
