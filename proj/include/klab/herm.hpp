#pragma once

#include <array>
#include <complex>
#include <vector>

#include "klab/field.hpp"
#include "klab/lattice.hpp"

namespace klab {

// Node-indexed Hermitian n x n matrix field, n = dim_c (1 or 2).
// Entries stored node-major, row-major per node: a[node*n*n + i*n + j] = A_{i j-bar}.
struct HermField {
    LatticePtr lat;
    int n = 0;
    std::vector<cdouble> a;

    HermField() = default;
    HermField(LatticePtr l, int n_) : lat(std::move(l)), n(n_), a(lat->nodes() * n_ * n_) {}

    std::size_t nodes() const { return lat->nodes(); }
    cdouble& at(std::size_t node, int i, int j) { return a[(node * n + i) * n + j]; }
    cdouble at(std::size_t node, int i, int j) const { return a[(node * n + i) * n + j]; }
};

// small fixed-size per-node matrix, used for all closed-form linear algebra
struct Herm2 {
    // h00, h11 real; h01 complex (h10 = conj(h01)); n = 1 uses h00 only
    double h00 = 0, h11 = 0;
    cdouble h01 = 0;
};

Herm2 load_herm(const HermField& f, std::size_t node);
void store_herm(HermField& f, std::size_t node, const Herm2& m, int n);

double herm_det(const Herm2& m, int n);
double herm_trace(const Herm2& m, int n);
Herm2 herm_inverse(const Herm2& m, int n);                 // throws on singular
double herm_min_eigenvalue(const Herm2& m, int n);
// trace(inv(A) * B), real for Hermitian A (invertible), B
double herm_trace_product_inv(const Herm2& a, const Herm2& b, int n);
// generalized eigenvalues of A relative to positive-definite B, ascending
std::array<double, 2> herm_gen_eigenvalues(const Herm2& a, const Herm2& b, int n);
// density of the wedge product of two (1,1)-forms: for n=2
// a00*b11 + a11*b00 - 2*Re(a01*conj(b01)); for n=1 not defined (use dets)
double herm_wedge_density(const Herm2& a, const Herm2& b);

// field-level helpers
HermField herm_add(const HermField& x, const HermField& y, double cx = 1, double cy = 1);
HermField herm_scale(const HermField& x, double c);
// A + c*B where B is a constant matrix
HermField herm_add_const(const HermField& x, const Herm2& b, double c);
RealField herm_det_field(const HermField& x);
// min eigenvalue over all nodes, with the attaining node
std::pair<double, std::size_t> herm_min_eigenvalue_global(const HermField& x);
// worst deviation from Hermitian symmetry, relative to the largest entry
double herm_asymmetry(const HermField& x);

}  // namespace klab
