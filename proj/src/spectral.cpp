#include "klab/spectral.hpp"

#include <cmath>

#include "klab/errors.hpp"
#include "klab/fft.hpp"

namespace klab {
namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

// signed derivative frequencies per axis; Nyquist projected to zero
std::vector<std::vector<double>> deriv_freqs(const Lattice& lat) {
    const int d = lat.real_dim();
    std::vector<std::vector<double>> k(d);
    for (int a = 0; a < d; ++a) {
        const int n = lat.resolution(a);
        k[a].resize(n);
        for (int m = 0; m < n; ++m) {
            int ms = m < n / 2 ? m : m - n;
            if (m == n / 2) ms = 0;
            k[a][m] = kTwoPi * ms / lat.period(a);
        }
    }
    return k;
}

// iterate modes, calling f(flat_index, per_axis_mode_indices)
template <typename F>
void for_modes(const Lattice& lat, F&& f) {
    const int d = lat.real_dim();
    std::vector<int> m(d, 0);
    const std::size_t n = lat.nodes();
    for (std::size_t idx = 0; idx < n; ++idx) {
        f(idx, m);
        for (int a = d - 1; a >= 0; --a) {
            if (++m[a] < lat.resolution(a)) break;
            m[a] = 0;
        }
    }
}

ComplexField multiply_modes(const ComplexField& f,
                            const std::function<cdouble(const std::vector<int>&)>& mult) {
    const Lattice& lat = *f.lat;
    std::vector<cdouble> hat = f.v;
    const Fft& fft = Fft::get(lat);
    fft.forward(hat);
    for_modes(lat, [&](std::size_t idx, const std::vector<int>& m) { hat[idx] *= mult(m); });
    fft.backward(hat);
    ComplexField out(f.lat);
    out.v = std::move(hat);
    return out;
}

}  // namespace

ComplexField wirtinger(const ComplexField& f, int axis, bool conjugate) {
    const Lattice& lat = *f.lat;
    if (axis < 0 || axis >= lat.dim_c())
        throw ConfigError("wirtinger: axis " + std::to_string(axis) + " out of range");
    auto k = deriv_freqs(lat);
    const int ax = 2 * axis, ay = 2 * axis + 1;
    const double s = conjugate ? -1.0 : 1.0;
    return multiply_modes(f, [&](const std::vector<int>& m) {
        return 0.5 * cdouble(s * k[ay][m[ay]], k[ax][m[ax]]);
    });
}

ComplexField wirtinger(const RealField& f, int axis, bool conjugate) {
    return wirtinger(to_complex(f), axis, conjugate);
}

ComplexField real_axis_derivative(const RealField& f, int real_axis) {
    const Lattice& lat = *f.lat;
    if (real_axis < 0 || real_axis >= lat.real_dim())
        throw ConfigError("real_axis_derivative: axis out of range");
    auto k = deriv_freqs(lat);
    return multiply_modes(to_complex(f), [&](const std::vector<int>& m) {
        return cdouble(0, k[real_axis][m[real_axis]]);
    });
}

HermField dds(const RealField& u) {
    const Lattice& lat = *u.lat;
    const int n = lat.dim_c();
    auto k = deriv_freqs(lat);
    std::vector<cdouble> hat(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) hat[i] = u[i];
    const Fft& fft = Fft::get(lat);
    fft.forward(hat);

    HermField out(u.lat, n);
    std::vector<cdouble> work(u.size());
    for (int i = 0; i < n; ++i) {
        for (int j = i; j < n; ++j) {
            for_modes(lat, [&](std::size_t idx, const std::vector<int>& m) {
                const cdouble wi = 0.5 * cdouble(k[2 * i + 1][m[2 * i + 1]], k[2 * i][m[2 * i]]);
                const cdouble sj = 0.5 * cdouble(-k[2 * j + 1][m[2 * j + 1]], k[2 * j][m[2 * j]]);
                work[idx] = hat[idx] * wi * sj;
            });
            fft.backward(work);
            for (std::size_t node = 0; node < u.size(); ++node) {
                if (i == j) {
                    out.at(node, i, i) = work[node].real();
                } else {
                    out.at(node, i, j) = work[node];
                    out.at(node, j, i) = std::conj(work[node]);
                }
            }
        }
    }
    return out;
}

RealField apply_flat_laplacian(const RealField& h) {
    const Lattice& lat = *h.lat;
    auto k = deriv_freqs(lat);
    auto out = multiply_modes(to_complex(h), [&](const std::vector<int>& m) {
        double s = 0;
        for (int a = 0; a < lat.real_dim(); ++a) s += k[a][m[a]] * k[a][m[a]];
        return cdouble(-0.25 * s, 0);
    });
    return real_part(out);
}

RealField solve_flat_poisson(const RealField& rhs, PoissonStats* stats) {
    const Lattice& lat = *rhs.lat;
    auto k = deriv_freqs(lat);
    std::vector<cdouble> hat(rhs.size());
    for (std::size_t i = 0; i < rhs.size(); ++i) hat[i] = rhs[i];
    const Fft& fft = Fft::get(lat);
    fft.forward(hat);

    const double m0 = std::abs(hat[0]) / static_cast<double>(rhs.size());
    const double sup = sup_norm(rhs);
    if (stats) *stats = PoissonStats{};
    if (m0 > 1e-10 * sup && sup > 0) {
        if (stats) {
            stats->projected = true;
            stats->projected_mean = hat[0].real() / static_cast<double>(rhs.size());
        }
    }
    for_modes(lat, [&](std::size_t idx, const std::vector<int>& m) {
        double s = 0;
        for (int a = 0; a < lat.real_dim(); ++a) s += k[a][m[a]] * k[a][m[a]];
        if (s == 0)
            hat[idx] = 0;  // mean and Nyquist-only content projected out
        else
            hat[idx] /= -0.25 * s;
    });
    fft.backward(hat);
    RealField out(rhs.lat);
    for (std::size_t i = 0; i < rhs.size(); ++i) out[i] = hat[i].real();
    return out;
}

double lipschitz_estimate(const RealField& f) {
    const Lattice& lat = *f.lat;
    std::vector<double> grad2(f.size(), 0.0);
    for (int a = 0; a < lat.real_dim(); ++a) {
        ComplexField d = real_axis_derivative(f, a);
        for (std::size_t i = 0; i < f.size(); ++i) grad2[i] += std::norm(d[i]);
    }
    double best = 0;
    for (double g : grad2) best = std::max(best, g);
    return std::sqrt(best);
}

double tail_energy_fraction(const RealField& f) {
    const Lattice& lat = *f.lat;
    std::vector<cdouble> hat(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) hat[i] = f[i];
    Fft::get(lat).forward(hat);
    double total = 0, tail = 0;
    for_modes(lat, [&](std::size_t idx, const std::vector<int>& m) {
        bool dc = true, top = false;
        for (int a = 0; a < lat.real_dim(); ++a) {
            const int n = lat.resolution(a);
            int ms = m[a] <= n / 2 ? m[a] : n - m[a];
            if (ms != 0) dc = false;
            if (ms >= n / 4) top = true;
        }
        if (dc) return;
        const double e = std::norm(hat[idx]);
        total += e;
        if (top) tail += e;
    });
    return total > 0 ? tail / total : 0.0;
}

}  // namespace klab
