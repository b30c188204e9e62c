#pragma once

#include <span>
#include <vector>

#include "interdesign/linalg.hpp"
#include "interdesign/poly.hpp"

namespace interdesign {

/// Shared state for the interlacing family of one (vectors, x, k) triple.
///
/// The family is the m-ary tree whose node (s_1,...,s_i) carries the expected
/// characteristic polynomial of k i.i.d. draws (v_j drawn with probability
/// x(j)/k) conditioned on the first i draws. Internally the vectors are
/// rescaled so that tr(M) = d, which keeps interpolation coefficients O(1);
/// all returned polynomials are mapped back to the caller's scale.
struct FamilyContext {
  Eigen::MatrixXd vectors;  // m x d
  std::vector<double> x;    // rescaled to sum exactly k
  int k = 0;
  SymMatrix M = SymMatrix::zero(1);  // gram(x, vectors)

  FamilyContext(Eigen::MatrixXd vectors, std::vector<double> x, int k);

  int dim() const { return static_cast<int>(vectors.cols()); }
  int count() const { return static_cast<int>(vectors.rows()); }

  /// Internal coordinate scale c with tr(c*M) = d (1 when tr(M) vanishes).
  double scale = 1.0;
};

/// A tree node: the ordered prefix of fixed indices plus its gram sum.
struct PartialSelection {
  std::vector<int> prefix;           // 0-based indices into ctx.vectors
  SymMatrix A = SymMatrix::zero(1);  // sum over the prefix of v v^T

  static PartialSelection root(int dim);
  PartialSelection extended(const FamilyContext& ctx, int t) const;
};

/// Closed form of the root polynomial:
///   f(x) = x^{d-k} * prod_i (1 - (lambda_i/k) d/dx) x^k,
/// monic of degree d. The low-order coefficients of the operator product must
/// vanish before the x^{k-d} division; a residue above 1e-8 raises
/// NotDivisible.
RealRootedPoly root_poly_closed_form(std::span<const double> eigs, int k, int d);

/// The normalized root polynomial (1 - (1/k) d/dx)^k x^d. Equals
/// root_poly_closed_form((1,...,1), k, d).
RealRootedPoly normalized_root_poly(int k, int d);

/// The conditional expected characteristic polynomial f_{s_1,...,s_i}.
///
/// With n = k - i remaining i.i.d. draws of mean B = M/k, the expectation
/// collapses onto the diagonal of the multi-affine expansion:
///   f(x) = sum_{r=0}^{min(d,n)} (-1)^r * n!/(n-r)! * c_r(x),
/// where Q(x, s) = det(x I - A + s B) = sum_r c_r(x) s^r. Q is recovered by
/// bivariate interpolation on Chebyshev-spaced node pairs; an interpolation
/// matrix with condition number above 1e12 raises NumericalFailure.
RealRootedPoly conditional_expected_charpoly(const FamilyContext& ctx,
                                             const PartialSelection& node);

/// Sampling probabilities p(j) = x(j)/k of the children of any node.
std::vector<double> children_weights(const FamilyContext& ctx);

}  // namespace interdesign
