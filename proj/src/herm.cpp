#include "klab/herm.hpp"

#include <cmath>
#include <limits>

#include "klab/errors.hpp"

namespace klab {

Herm2 load_herm(const HermField& f, std::size_t node) {
    Herm2 m;
    m.h00 = f.at(node, 0, 0).real();
    if (f.n == 2) {
        m.h11 = f.at(node, 1, 1).real();
        m.h01 = f.at(node, 0, 1);
    }
    return m;
}

void store_herm(HermField& f, std::size_t node, const Herm2& m, int n) {
    f.at(node, 0, 0) = m.h00;
    if (n == 2) {
        f.at(node, 1, 1) = m.h11;
        f.at(node, 0, 1) = m.h01;
        f.at(node, 1, 0) = std::conj(m.h01);
    }
}

double herm_det(const Herm2& m, int n) {
    if (n == 1) return m.h00;
    return m.h00 * m.h11 - std::norm(m.h01);
}

double herm_trace(const Herm2& m, int n) { return n == 1 ? m.h00 : m.h00 + m.h11; }

Herm2 herm_inverse(const Herm2& m, int n) {
    Herm2 r;
    if (n == 1) {
        if (m.h00 == 0) throw SolverError("singular 1x1 hermitian matrix");
        r.h00 = 1.0 / m.h00;
        return r;
    }
    const double det = herm_det(m, 2);
    if (det == 0) throw SolverError("singular 2x2 hermitian matrix");
    r.h00 = m.h11 / det;
    r.h11 = m.h00 / det;
    r.h01 = -m.h01 / det;
    return r;
}

double herm_min_eigenvalue(const Herm2& m, int n) {
    if (n == 1) return m.h00;
    const double tr = m.h00 + m.h11;
    const double det = herm_det(m, 2);
    const double disc = std::sqrt(std::max(0.0, tr * tr - 4 * det));
    return 0.5 * (tr - disc);
}

double herm_trace_product_inv(const Herm2& a, const Herm2& b, int n) {
    if (n == 1) return b.h00 / a.h00;
    // tr(inv(A) B) = tr(adj(A) B) / det(A)
    const double det = herm_det(a, 2);
    const double t = a.h11 * b.h00 + a.h00 * b.h11 - 2 * std::real(std::conj(a.h01) * b.h01);
    return t / det;
}

std::array<double, 2> herm_gen_eigenvalues(const Herm2& a, const Herm2& b, int n) {
    if (n == 1) return {a.h00 / b.h00, 0.0};
    // det(A - x B) = detB x^2 - m x + detA with m = a00 b11 + a11 b00 - 2 Re(a01 conj(b01))
    const double detb = herm_det(b, 2);
    const double deta = herm_det(a, 2);
    const double m = a.h00 * b.h11 + a.h11 * b.h00 - 2 * std::real(a.h01 * std::conj(b.h01));
    const double disc = std::sqrt(std::max(0.0, m * m - 4 * detb * deta));
    double x1 = (m - disc) / (2 * detb);
    double x2 = (m + disc) / (2 * detb);
    return {x1, x2};
}

double herm_wedge_density(const Herm2& a, const Herm2& b) {
    return a.h00 * b.h11 + a.h11 * b.h00 - 2 * std::real(a.h01 * std::conj(b.h01));
}

HermField herm_add(const HermField& x, const HermField& y, double cx, double cy) {
    HermField out(x.lat, x.n);
    for (std::size_t i = 0; i < x.a.size(); ++i) out.a[i] = cx * x.a[i] + cy * y.a[i];
    return out;
}

HermField herm_scale(const HermField& x, double c) {
    HermField out(x.lat, x.n);
    for (std::size_t i = 0; i < x.a.size(); ++i) out.a[i] = c * x.a[i];
    return out;
}

HermField herm_add_const(const HermField& x, const Herm2& b, double c) {
    HermField out(x.lat, x.n);
    const std::size_t nn = x.nodes();
    for (std::size_t node = 0; node < nn; ++node) {
        Herm2 m = load_herm(x, node);
        m.h00 += c * b.h00;
        m.h11 += c * b.h11;
        m.h01 += c * b.h01;
        store_herm(out, node, m, x.n);
    }
    return out;
}

RealField herm_det_field(const HermField& x) {
    RealField out(x.lat);
    for (std::size_t node = 0; node < x.nodes(); ++node)
        out[node] = herm_det(load_herm(x, node), x.n);
    return out;
}

std::pair<double, std::size_t> herm_min_eigenvalue_global(const HermField& x) {
    double best = std::numeric_limits<double>::infinity();
    std::size_t at = 0;
    for (std::size_t node = 0; node < x.nodes(); ++node) {
        double e = herm_min_eigenvalue(load_herm(x, node), x.n);
        if (e < best) { best = e; at = node; }
    }
    return {best, at};
}

double herm_asymmetry(const HermField& x) {
    double worst = 0, scale = 0;
    for (std::size_t node = 0; node < x.nodes(); ++node) {
        for (int i = 0; i < x.n; ++i)
            for (int j = 0; j < x.n; ++j) {
                const cdouble d = x.at(node, i, j) - std::conj(x.at(node, j, i));
                worst = std::max(worst, std::abs(d));
                scale = std::max(scale, std::abs(x.at(node, i, j)));
            }
    }
    return scale > 0 ? worst / scale : worst;
}

}  // namespace klab
