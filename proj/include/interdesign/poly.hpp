#pragma once

#include <span>
#include <vector>

#include "interdesign/errors.hpp"

namespace interdesign {

/// Dense univariate polynomial with real coefficients stored in ascending
/// powers. Constructors trim trailing zeros so the leading coefficient is
/// nonzero (the zero polynomial is stored as a single zero coefficient).
///
/// Root-access operations assume the polynomial is real-rooted; this is a
/// contract of the interlacing-family constructions and is not verified here.
struct RealRootedPoly {
  std::vector<double> coeffs;  // coeffs[i] multiplies x^i

  RealRootedPoly() : coeffs{0.0} {}
  explicit RealRootedPoly(std::vector<double> c);

  /// scale * x^n
  static RealRootedPoly monomial(int n, double scale = 1.0);
  /// Monic polynomial with the given real roots.
  static RealRootedPoly from_roots(std::span<const double> roots);

  int degree() const { return static_cast<int>(coeffs.size()) - 1; }
  bool is_zero() const;
  double leading() const { return coeffs.back(); }
};

/// Horner evaluation of p at x.
double eval(const RealRootedPoly& p, double x);

/// order-th derivative; order greater than the degree gives the zero
/// polynomial.
RealRootedPoly derivative(const RealRootedPoly& p, int order = 1);

/// (1 - lambda * d/dx) p = p - lambda * p'. Preserves degree and leading
/// coefficient. For lambda > 0 and real-rooted p the result is real-rooted.
RealRootedPoly apply_shift_op(const RealRootedPoly& p, double lambda);

/// Coefficientwise weighted sum. All inputs must share the same degree and
/// the weights must be nonnegative and sum to 1 (within 1e-12).
RealRootedPoly convex_combination(std::span<const RealRootedPoly> polys,
                                  std::span<const double> weights);

struct SoftMinParams {
  double alpha = 0.0;  // must be > 0
};

/// Smallest root of a real-rooted polynomial to additive accuracy eps.
///
/// Newton iteration started at the negated Cauchy bound -(1 + sum|c_i|/|lead|),
/// which lies below all roots; from there the iteration increases
/// monotonically toward the minimum root. A sizable backward step signals a
/// non-real-rooted input and raises NumericalFailure.
double min_root(const RealRootedPoly& p, double eps = 1e-9);

/// Soft minimum: the smallest root of p + alpha * p'. Always strictly below
/// min_root(p); in fact alpha_min(p) + alpha <= min_root(p).
double alpha_min(const RealRootedPoly& p, SoftMinParams params,
                 double eps = 1e-9);

}  // namespace interdesign
