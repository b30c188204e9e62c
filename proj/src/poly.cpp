#include "interdesign/poly.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>

namespace interdesign {

namespace {

void trim(std::vector<double>& c) {
  while (c.size() > 1 && c.back() == 0.0) c.pop_back();
  if (c.empty()) c.push_back(0.0);
}

}  // namespace

RealRootedPoly::RealRootedPoly(std::vector<double> c) : coeffs(std::move(c)) {
  trim(coeffs);
}

RealRootedPoly RealRootedPoly::monomial(int n, double scale) {
  if (n < 0) throw InvalidInstance("monomial: negative power");
  std::vector<double> c(static_cast<std::size_t>(n) + 1, 0.0);
  c.back() = scale;
  return RealRootedPoly(std::move(c));
}

RealRootedPoly RealRootedPoly::from_roots(std::span<const double> roots) {
  std::vector<double> c{1.0};
  for (double r : roots) {
    c.push_back(0.0);
    for (std::size_t i = c.size() - 1; i > 0; --i) c[i] = c[i - 1] - r * c[i];
    c[0] *= -r;
  }
  return RealRootedPoly(std::move(c));
}

bool RealRootedPoly::is_zero() const {
  return coeffs.size() == 1 && coeffs[0] == 0.0;
}

double eval(const RealRootedPoly& p, double x) {
  double acc = 0.0;
  for (std::size_t i = p.coeffs.size(); i-- > 0;) acc = acc * x + p.coeffs[i];
  return acc;
}

RealRootedPoly derivative(const RealRootedPoly& p, int order) {
  if (order < 0) throw InvalidInstance("derivative: negative order");
  if (order == 0) return p;
  if (order > p.degree()) return RealRootedPoly();
  std::vector<double> c(p.coeffs.size() - static_cast<std::size_t>(order));
  for (std::size_t i = 0; i < c.size(); ++i) {
    double factor = 1.0;
    for (int t = 0; t < order; ++t) factor *= static_cast<double>(i + order - t);
    c[i] = p.coeffs[i + static_cast<std::size_t>(order)] * factor;
  }
  return RealRootedPoly(std::move(c));
}

RealRootedPoly apply_shift_op(const RealRootedPoly& p, double lambda) {
  std::vector<double> c = p.coeffs;
  for (std::size_t i = 0; i + 1 < c.size(); ++i) {
    c[i] -= lambda * static_cast<double>(i + 1) * p.coeffs[i + 1];
  }
  return RealRootedPoly(std::move(c));
}

RealRootedPoly convex_combination(std::span<const RealRootedPoly> polys,
                                  std::span<const double> weights) {
  if (polys.empty() || polys.size() != weights.size()) {
    throw DegreeMismatch("convex_combination: empty input or size mismatch");
  }
  const int deg = polys[0].degree();
  double sum = 0.0;
  for (double w : weights) {
    if (w < 0.0) throw WeightSumError("convex_combination: negative weight");
    sum += w;
  }
  if (std::abs(sum - 1.0) > 1e-12) {
    throw WeightSumError("convex_combination: weights do not sum to 1");
  }
  std::vector<double> c(static_cast<std::size_t>(deg) + 1, 0.0);
  for (std::size_t t = 0; t < polys.size(); ++t) {
    if (polys[t].degree() != deg) {
      throw DegreeMismatch("convex_combination: mixed degrees");
    }
    for (std::size_t i = 0; i < c.size(); ++i) {
      c[i] += weights[t] * polys[t].coeffs[i];
    }
  }
  return RealRootedPoly(std::move(c));
}

double min_root(const RealRootedPoly& p, double eps) {
  if (eps <= 0.0) throw InvalidInstance("min_root: eps must be positive");
  if (p.is_zero() || p.degree() < 1) {
    throw NumericalFailure("min_root: polynomial has no roots");
  }
  const RealRootedPoly dp = derivative(p);
  const double lead = std::abs(p.leading());
  double mag = 0.0;
  for (double c : p.coeffs) mag += std::abs(c);
  double x = -(1.0 + mag / lead);  // Cauchy bound negated, below all roots

  const int max_iter = 400000;
  for (int it = 0; it < max_iter; ++it) {
    const double fx = eval(p, x);
    const double dfx = eval(dp, x);
    if (!std::isfinite(fx) || !std::isfinite(dfx)) {
      throw NumericalFailure("min_root: evaluation overflow");
    }
    if (fx == 0.0) return x;
    if (dfx == 0.0) {
      x += eps;
      continue;
    }
    const double next = x - fx / dfx;
    if (next < x) {
      // Monotone from below; a backward step means roundoff dominates, which
      // only happens once the residual sits at the noise floor of evaluation.
      double scale = 0.0, pw = 1.0;
      for (double c : p.coeffs) {
        scale += std::abs(c) * pw;
        pw *= std::abs(x);
      }
      if (x - next <= std::max(1e3 * eps, 1e-9 * (1.0 + std::abs(x))) ||
          std::abs(fx) <= 1e4 * std::numeric_limits<double>::epsilon() * scale) {
        return x;
      }
      throw NumericalFailure("min_root: Newton step went backward");
    }
    if (next - x < eps) return next;
    x = next;
  }
  throw NumericalFailure("min_root: iteration cap reached");
}

double alpha_min(const RealRootedPoly& p, SoftMinParams params, double eps) {
  if (params.alpha <= 0.0) throw InvalidInstance("alpha_min: alpha must be positive");
  const RealRootedPoly dp = derivative(p);
  std::vector<double> c = p.coeffs;
  for (std::size_t i = 0; i < dp.coeffs.size(); ++i) {
    if (!(dp.is_zero())) c[i] += params.alpha * dp.coeffs[i];
  }
  return min_root(RealRootedPoly(std::move(c)), eps);
}

}  // namespace interdesign
