#include "interdesign/family.hpp"

#include <cmath>
#include <numbers>

namespace interdesign {

namespace {

// Falling factorial n(n-1)...(n-r+1) = C(n,r) * r!, in double. Switches to
// log-gamma only where the direct product would overflow.
double falling_factorial(int n, int r) {
  if (r > n) return 0.0;
  if (n > 170) {
    return std::exp(std::lgamma(n + 1.0) - std::lgamma(n - r + 1.0));
  }
  double acc = 1.0;
  for (int t = 0; t < r; ++t) acc *= static_cast<double>(n - t);
  return acc;
}

Eigen::VectorXd chebyshev_nodes(int count, double lo, double hi) {
  Eigen::VectorXd nodes(count);
  for (int j = 0; j < count; ++j) {
    const double t = std::cos(std::numbers::pi * (2.0 * j + 1.0) / (2.0 * count));
    nodes(j) = lo + (hi - lo) * (t + 1.0) / 2.0;
  }
  return nodes;
}

Eigen::MatrixXd vandermonde(const Eigen::VectorXd& nodes) {
  const int n = static_cast<int>(nodes.size());
  Eigen::MatrixXd V(n, n);
  for (int i = 0; i < n; ++i) {
    double pw = 1.0;
    for (int j = 0; j < n; ++j) {
      V(i, j) = pw;
      pw *= nodes(i);
    }
  }
  return V;
}

}  // namespace

FamilyContext::FamilyContext(Eigen::MatrixXd vecs, std::vector<double> weights,
                             int budget)
    : vectors(std::move(vecs)), x(std::move(weights)), k(budget),
      M(SymMatrix::zero(1)) {
  const int m = static_cast<int>(vectors.rows());
  const int d = static_cast<int>(vectors.cols());
  if (d < 1 || m < 1 || k < 1) {
    throw InvalidInstance("FamilyContext: need d >= 1, m >= 1, k >= 1");
  }
  if (static_cast<int>(x.size()) != m) {
    throw InvalidInstance("FamilyContext: weight vector length mismatch");
  }
  double sum = 0.0;
  for (double w : x) {
    if (w < 0.0) throw InvalidInstance("FamilyContext: negative weight");
    sum += w;
  }
  if (sum <= 0.0) throw InvalidInstance("FamilyContext: zero total weight");
  if (std::abs(sum - k) > 1e-6 * k) {
    throw InvalidInstance("FamilyContext: weights must sum to k");
  }
  for (double& w : x) w *= static_cast<double>(k) / sum;
  M = gram(x, vectors);
  const double tr = M.trace();
  scale = tr > 0.0 ? static_cast<double>(d) / tr : 1.0;
}

std::vector<double> children_weights(const FamilyContext& ctx) {
  std::vector<double> p = ctx.x;
  for (double& w : p) w /= static_cast<double>(ctx.k);
  return p;
}

PartialSelection PartialSelection::root(int dim) {
  return {{}, SymMatrix::zero(dim)};
}

PartialSelection PartialSelection::extended(const FamilyContext& ctx, int t) const {
  if (t < 0 || t >= ctx.count()) {
    throw InvalidInstance("PartialSelection: index out of range");
  }
  if (static_cast<int>(prefix.size()) >= ctx.k) {
    throw InvalidInstance("PartialSelection: prefix already has k entries");
  }
  PartialSelection next = *this;
  next.prefix.push_back(t);
  SymMatrix A2 = A;
  A2.rank_one_update(ctx.vectors.row(t).transpose());
  next.A = A2;
  return next;
}

RealRootedPoly root_poly_closed_form(std::span<const double> eigs, int k, int d) {
  if (d < 1 || k < d) throw InvalidInstance("root_poly_closed_form: need k >= d >= 1");
  if (static_cast<int>(eigs.size()) != d) {
    throw InvalidInstance("root_poly_closed_form: need d eigenvalues");
  }
  RealRootedPoly p = RealRootedPoly::monomial(k);
  for (double lam : eigs) {
    if (lam < -1e-12) throw InvalidInstance("root_poly_closed_form: negative eigenvalue");
    p = apply_shift_op(p, lam / static_cast<double>(k));
  }
  // Divide by x^{k-d}. The operator product never reaches below x^{k-d}.
  double max_coeff = 0.0;
  for (double c : p.coeffs) max_coeff = std::max(max_coeff, std::abs(c));
  std::vector<double> out(static_cast<std::size_t>(d) + 1, 0.0);
  for (int j = 0; j <= p.degree(); ++j) {
    if (j < k - d) {
      if (std::abs(p.coeffs[j]) > 1e-8 * std::max(1.0, max_coeff)) {
        throw NotDivisible("root_poly_closed_form: nonzero low-order residue");
      }
    } else {
      out[static_cast<std::size_t>(j - (k - d))] = p.coeffs[j];
    }
  }
  return RealRootedPoly(std::move(out));
}

RealRootedPoly normalized_root_poly(int k, int d) {
  if (d < 1 || k < d) throw InvalidInstance("normalized_root_poly: need k >= d >= 1");
  RealRootedPoly p = RealRootedPoly::monomial(d);
  for (int i = 0; i < k; ++i) p = apply_shift_op(p, 1.0 / static_cast<double>(k));
  return p;
}

RealRootedPoly conditional_expected_charpoly(const FamilyContext& ctx,
                                             const PartialSelection& node) {
  const int d = ctx.dim();
  const int i = static_cast<int>(node.prefix.size());
  if (i > ctx.k) throw InvalidInstance("conditional_expected_charpoly: prefix too long");
  if (node.A.dim() != d) {
    throw InvalidInstance("conditional_expected_charpoly: node dimension mismatch");
  }
  const int n = ctx.k - i;
  if (n == 0) return char_poly(node.A);

  // Work in the scaled coordinates tr(c*M) = d.
  const double c2 = ctx.scale;
  const Eigen::MatrixXd As = c2 * node.A.data();
  const Eigen::MatrixXd Bs = (c2 / static_cast<double>(ctx.k)) * ctx.M.data();

  // Fit in a normalized variable on [-1, 1]: a monomial Vandermonde on
  // one-sided intervals like [0, 2k] is too ill-conditioned at d = 6.
  const int nn = d + 1;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> top(
      As + static_cast<double>(ctx.k) * Bs, Eigen::EigenvaluesOnly);
  const double x_r = top.eigenvalues().maxCoeff() + 1.0;
  const double s_r = static_cast<double>(ctx.k);
  const Eigen::VectorXd us = chebyshev_nodes(nn, -1.0, 1.0);

  Eigen::MatrixXd Q(nn, nn);  // Q(a, b) = det(x_r us(a) I - As + s_r us(b) Bs)
  const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(d, d);
  for (int b = 0; b < nn; ++b) {
    const Eigen::MatrixXd base = s_r * us(b) * Bs - As;
    for (int a = 0; a < nn; ++a) {
      Q(a, b) = (x_r * us(a) * I + base).determinant();
    }
  }

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(vandermonde(us),
                                        Eigen::ComputeThinU | Eigen::ComputeThinV);
  const double cond = svd.singularValues()(0) / svd.singularValues()(nn - 1);
  if (!std::isfinite(cond) || cond > 1e12) {
    throw NumericalFailure("conditional_expected_charpoly: ill-conditioned interpolation");
  }

  // ax(p, b): coefficient of u^p at s-node b, then cps(p, r): of u^p t^r.
  const Eigen::MatrixXd ax = svd.solve(Q);
  Eigen::MatrixXd cps = svd.solve(ax.transpose()).transpose();
  // Back to coefficients of x^p s^r.
  for (int p = 0; p <= d; ++p) {
    for (int r = 0; r <= d; ++r) {
      cps(p, r) /= std::pow(x_r, p) * std::pow(s_r, r);
    }
  }

  std::vector<double> coeffs(static_cast<std::size_t>(d) + 1, 0.0);
  const int r_max = std::min(d, n);
  for (int p = 0; p <= d; ++p) {
    double acc = 0.0;
    for (int r = 0; r <= r_max; ++r) {
      const double sign = (r % 2 == 0) ? 1.0 : -1.0;
      acc += sign * falling_factorial(n, r) * cps(p, r);
    }
    // Undo the coordinate scaling: f(x) = c2^{-d} f_scaled(c2 x).
    coeffs[static_cast<std::size_t>(p)] = acc * std::pow(c2, p - d);
  }

  const double lead = coeffs.back();
  if (!(std::abs(lead - 1.0) < 1e-4)) {
    throw NumericalFailure("conditional_expected_charpoly: lost monic leading term");
  }
  for (double& c : coeffs) c /= lead;
  coeffs.back() = 1.0;
  return RealRootedPoly(std::move(coeffs));
}

}  // namespace interdesign
