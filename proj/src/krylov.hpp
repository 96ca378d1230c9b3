#pragma once

#include <cmath>
#include <functional>
#include <vector>

#include "klab/errors.hpp"
#include "klab/simd/kernels.hpp"

namespace klab::detail {

using Vec = std::vector<double>;
using Op = std::function<void(const Vec& in, Vec& out)>;

inline double nrm2(const Vec& x) {
    return std::sqrt(simd::active().dot(x.data(), x.data(), x.size()));
}

// right-preconditioned BiCGStab; solves A x = b to ||r||_2 <= rtol * ||b||_2.
// Returns the iteration count; throws SolverError on breakdown/stagnation.
inline int bicgstab(const Op& apply_a, const Op& apply_minv, const Vec& b, Vec& x,
                    double rtol, int max_iter) {
    const auto& K = simd::active();
    const std::size_t n = b.size();
    const double bnorm = nrm2(b);
    if (bnorm == 0) {
        x.assign(n, 0.0);
        return 0;
    }
    if (x.size() != n) x.assign(n, 0.0);

    Vec r(n), r0(n), p(n, 0.0), v(n, 0.0), s(n), t(n), phat(n), shat(n), tmp(n);
    apply_a(x, tmp);
    for (std::size_t i = 0; i < n; ++i) r[i] = b[i] - tmp[i];
    r0 = r;
    double rho = 1, alpha = 1, omega = 1;

    for (int it = 1; it <= max_iter; ++it) {
        const double rho1 = K.dot(r0.data(), r.data(), n);
        if (rho1 == 0) throw SolverError("bicgstab breakdown (rho = 0)");
        if (it == 1) {
            p = r;
        } else {
            const double beta = (rho1 / rho) * (alpha / omega);
            for (std::size_t i = 0; i < n; ++i) p[i] = r[i] + beta * (p[i] - omega * v[i]);
        }
        rho = rho1;
        apply_minv(p, phat);
        apply_a(phat, v);
        alpha = rho / K.dot(r0.data(), v.data(), n);
        if (!std::isfinite(alpha)) throw SolverError("bicgstab breakdown (alpha)");
        for (std::size_t i = 0; i < n; ++i) s[i] = r[i] - alpha * v[i];
        if (nrm2(s) <= rtol * bnorm) {
            K.axpy(x.data(), alpha, phat.data(), n);
            return it;
        }
        apply_minv(s, shat);
        apply_a(shat, t);
        omega = K.dot(t.data(), s.data(), n) / K.dot(t.data(), t.data(), n);
        if (omega == 0 || !std::isfinite(omega))
            throw SolverError("bicgstab breakdown (omega)");
        for (std::size_t i = 0; i < n; ++i) {
            x[i] += alpha * phat[i] + omega * shat[i];
            r[i] = s[i] - omega * t[i];
        }
        if (nrm2(r) <= rtol * bnorm) return it;
    }
    throw SolverError("bicgstab: no convergence in " + std::to_string(max_iter) +
                      " iterations");
}

}  // namespace klab::detail
