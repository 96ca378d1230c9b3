#pragma once

#include <optional>

#include "klab/field.hpp"
#include "klab/herm.hpp"

namespace klab {

// Fourier-multiplier Wirtinger calculus on a periodic lattice.
//
// Convention: d/dz_a = (d/dx_a - i d/dy_a)/2, with x_a = real axis 2a and
// y_a = real axis 2a+1. Nyquist modes are projected out of every derivative
// so that mixed derivatives of real fields stay Hermitian; smooth fields have
// no energy there and the tail diagnostic flags the ones that do.

// d/dz_axis (conjugate = false) or d/dzbar_axis (conjugate = true)
ComplexField wirtinger(const ComplexField& f, int axis, bool conjugate);
ComplexField wirtinger(const RealField& f, int axis, bool conjugate);

// d/dx along a real axis (for gradient/Lipschitz estimates)
ComplexField real_axis_derivative(const RealField& f, int real_axis);

// full Wirtinger Hessian H_{i jbar} = d_i d_jbar u; Hermitian per node
HermField dds(const RealField& u);

// sum_a d_a d_abar h (one quarter of the flat real Laplacian)
RealField apply_flat_laplacian(const RealField& h);

struct PoissonStats {
    double projected_mean = 0;  // mean removed from the rhs, if any
    bool projected = false;
};

// zero-mean h with sum_a d_a d_abar h = rhs, inverted mode by mode.
// A rhs mean above 1e-10 * sup|rhs| is projected out and recorded in stats.
RealField solve_flat_poisson(const RealField& rhs, PoissonStats* stats = nullptr);

// max over nodes of |grad f| (spectral gradient over the real axes)
double lipschitz_estimate(const RealField& f);

// fraction of spectral energy in the top octave of each axis; a resolution
// health metric, not an error
double tail_energy_fraction(const RealField& f);

}  // namespace klab
