#pragma once

#include <Eigen/Dense>

#include "cosetforge/func.hpp"

namespace cosetforge {

using CMatrix = Eigen::MatrixXcd;

/// The linear operator g -> f*g on L2(G), written in the point-mass basis.
/// Entry (x, z) is f(x z^-1)/n, so matrix * coords(g) = coords of
/// convolve_mean(f, g). Rescaling every basis vector by the same factor
/// (the counting-vs-uniform inner product) conjugates by a scalar matrix and
/// leaves the entries, hence the singular values, untouched.
struct ConvOperator {
  GroupPtr group;
  CMatrix matrix;
  FuncC source;
};

ConvOperator conv_operator(const FuncC& f);

/// The algebra norm of f: the trace norm (sum of singular values) of
/// conv_operator(f). Deterministic to 1e-9 across runs on the same input.
double algebra_norm(const FuncC& f);

/// l1 norm of the Fourier transform, sum_t |E_x f(x) conj(chi_t(x))|, over
/// the characters of a group built from explicit cyclic factors. Independent
/// of the SVD route: characters are evaluated in closed form from a root
/// table. Throws NotExplicitlyAbelian when the group carries no factor list
/// (raw tables, dihedral, symmetric).
double fourier_l1_abelian(const FuncC& f);

/// f split against a subgroup: the part constant on left cosets of H and the
/// remainder, with their norms. The algebra norm is additive across the two
/// parts; split() certifies that before returning.
struct SplitResult {
  FuncC structured;       // f * m_H
  FuncC residual;         // f - f * m_H
  double structured_norm; // algebra norm of the structured part
  double residual_norm;   // algebra norm of the residual
  double total_norm;      // algebra norm of f itself
};

/// Splits f into (f * m_H, f - f * m_H) and checks
/// |total - structured - residual| <= 1e-7, else AdditivityViolation.
SplitResult split(const FuncC& f, const Subgroup& h);

/// f written as a weighted average of convolutions of unit-norm functions:
///   f(x) = constant * E_w [ tilde(h_w) * g_w ](x),
/// with E_w over `weights` and every h_w, g_w of unit L2(m_G) norm. The data
/// comes from the singular value decomposition of conv_operator(f); pairs
/// with a negligible singular value (below 1e-12 of the largest) are dropped,
/// so `constant` matches algebra_norm(f) to that relative accuracy.
///
/// The same data in matrix-coefficient form: f(x) = <pi(x) v, w> where pi is
/// a block-diagonal stack of copies of the right regular representation
/// (block (t, s) of each copy is 1 iff s = t x) and <a, b> = sum a conj(b).
/// Then |v| * |w| = constant <= algebra_norm(f).
struct BGFactorization {
  GroupPtr group;
  double constant;              // sum of the kept singular values
  std::vector<double> weights;  // probability vector, one entry per pair
  std::vector<FuncC> h;         // left factors, unit L2(m_G) norm
  std::vector<FuncC> g;         // right factors, unit L2(m_G) norm

  int dimension;                // d = (#pairs) * |G|
  Eigen::VectorXcd v, w;        // |v|^2 = |w|^2 = constant

  /// pi(x): the d x d 0/1 matrix of the block right-regular action.
  CMatrix representation(element_t x) const;
};

BGFactorization bg_factorize(const FuncC& f);

}  // namespace cosetforge
