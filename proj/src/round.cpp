#include "interdesign/round.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace interdesign {

bool score_less(const ObjectiveScore& a, const ObjectiveScore& b) {
  if (a.is_infinite) return false;
  if (b.is_infinite) return true;
  return a.value < b.value;
}

namespace {

bool maximizing(ObjectiveKind kind) {
  return kind.tag == ObjectiveKind::Tag::E || kind.tag == ObjectiveKind::Tag::D;
}

bool better(const ObjectiveScore& cand, const ObjectiveScore& best,
            ObjectiveKind kind) {
  return maximizing(kind) ? score_less(best, cand) : score_less(cand, best);
}

double factorial_ratio_root(int k, int l, int l_prime, int order) {
  // ((k-l)!/(k-l')!)^{1/order} via log-gamma.
  return std::exp(
      (std::lgamma(k - l + 1.0) - std::lgamma(k - l_prime + 1.0)) / order);
}

}  // namespace

ObjectiveScore node_score(const RealRootedPoly& p, ObjectiveKind kind, int d,
                          double eps) {
  if (p.degree() != d) throw DegreeMismatch("node_score: polynomial degree != d");
  switch (kind.tag) {
    case ObjectiveKind::Tag::E:
      return ObjectiveScore::finite(min_root(p, eps));
    case ObjectiveKind::Tag::D: {
      const double sign = (d % 2 == 0) ? 1.0 : -1.0;
      return ObjectiveScore::finite(sign * p.coeffs[0]);
    }
    case ObjectiveKind::Tag::A:
    case ObjectiveKind::Tag::Ratio: {
      const auto [lp, l] = kind.ratio_pair(d);
      // With nonnegative real roots the coefficient of x^{d-j} carries sign
      // (-1)^j. A denominator on the wrong side of zero is cancellation noise
      // around a true zero, so it gets the same sentinel as an exact zero.
      const double num = ((lp % 2 == 0) ? 1.0 : -1.0) *
                         p.coeffs[static_cast<std::size_t>(d - lp)];
      const double den = ((l % 2 == 0) ? 1.0 : -1.0) *
                         p.coeffs[static_cast<std::size_t>(d - l)];
      // Maclaurin: e_l <= C(d,l) (e_1/d)^l, so anything far below that scale
      // is noise around a true zero as well.
      const double e1 = std::abs(p.coeffs[static_cast<std::size_t>(d - 1)]);
      double den_scale = 1.0;
      for (int j = 1; j <= l; ++j) {
        den_scale *= (d - j + 1.0) / j * (e1 / d);
      }
      if (den <= 1e-9 * den_scale) return ObjectiveScore::infinite();
      return ObjectiveScore::finite(num / den);
    }
  }
  throw InvalidInstance("node_score: bad tag");
}

double theorem_bound(ObjectiveKind kind, int d, int k) {
  if (k < 1 || d < 1) throw InvalidInstance("theorem_bound: need k, d >= 1");
  switch (kind.tag) {
    case ObjectiveKind::Tag::E: {
      if (k < d) throw InvalidInstance("theorem_bound: need k >= d");
      const double r = 1.0 - std::sqrt(static_cast<double>(d - 1) / k);
      return 1.0 / (r * r);
    }
    case ObjectiveKind::Tag::D:
      if (k < d) throw InvalidInstance("theorem_bound: need k >= d");
      return k * factorial_ratio_root(k, d, 0, d);
    case ObjectiveKind::Tag::A:
      if (k < d) throw InvalidInstance("theorem_bound: need k >= d");
      return static_cast<double>(k) / (k - d + 1);
    case ObjectiveKind::Tag::Ratio: {
      if (k < kind.l) throw InvalidInstance("theorem_bound: need k >= l");
      // Exact factor from the root-polynomial coefficient identities; it
      // specializes to the D bound at (0, d) and to k/(k-d+1) at (d-1, d).
      return k * factorial_ratio_root(k, kind.l, kind.l_prime,
                                      kind.l - kind.l_prime);
    }
  }
  throw InvalidInstance("theorem_bound: bad tag");
}

RoundingResult round_design(const Instance& inst, const FractionalSolution& frac,
                            ObjectiveKind kind) {
  inst.validate();
  kind.validate(inst.d);
  const int m = inst.count();
  const int d = inst.d;
  if (static_cast<int>(frac.x.size()) != m) {
    throw InvalidInstance("round_design: fractional solution length mismatch");
  }

  Eigen::MatrixXd W = inst.vectors;
  if (kind.tag == ObjectiveKind::Tag::E) {
    // Normalize so that sum x(i) w_i w_i^T = I.
    const SymMatrix R = inv_sqrt(frac.X);
    W = inst.vectors * R.data();
  }

  FamilyContext ctx(W, frac.x, inst.k);
  PartialSelection node = PartialSelection::root(d);
  ObjectiveScore parent_score =
      node_score(conditional_expected_charpoly(ctx, node), kind, d);

  for (int level = 0; level < inst.k; ++level) {
    int best_t = -1;
    ObjectiveScore best_score;
    PartialSelection best_node = node;
    for (int t = 0; t < m; ++t) {
      PartialSelection child = node.extended(ctx, t);
      const ObjectiveScore s =
          node_score(conditional_expected_charpoly(ctx, child), kind, d);
      if (best_t < 0 || better(s, best_score, kind)) {
        best_t = t;
        best_score = s;
        best_node = std::move(child);
      }
    }
    // One-sided sandwich: the best child can never be worse than the parent.
    if (!parent_score.is_infinite && !best_score.is_infinite) {
      const double slack = 1e-6 * std::max(1.0, std::abs(parent_score.value));
      const bool bad = maximizing(kind)
                           ? best_score.value < parent_score.value - slack
                           : best_score.value > parent_score.value + slack;
      if (bad) {
        throw GuaranteeViolated("round_design: selected child scored worse than parent");
      }
    } else if (parent_score.is_infinite && !maximizing(kind) &&
               !best_score.is_infinite) {
      // finite <= infinity, fine
    } else if (parent_score.is_infinite && maximizing(kind)) {
      throw GuaranteeViolated("round_design: unexpected infinite score");
    }
    node = std::move(best_node);
    parent_score = best_score;
  }

  RoundingResult out;
  out.selection = node.prefix;
  std::vector<double> ones(static_cast<std::size_t>(out.selection.size()), 1.0);
  Eigen::MatrixXd chosen(out.selection.size(), d);
  for (std::size_t i = 0; i < out.selection.size(); ++i) {
    chosen.row(static_cast<Eigen::Index>(i)) =
        inst.vectors.row(out.selection[i]);
  }
  out.integral_objective = fractional_objective(gram(ones, chosen), kind);
  out.fractional_objective = fractional_objective(frac.X, kind);
  out.certified_ratio = out.integral_objective / out.fractional_objective;
  out.theorem_bound = theorem_bound(kind, d, inst.k);
  return out;
}

bool certify(const RoundingResult& result, const FractionalSolution& frac,
             ObjectiveKind kind) {
  const double budget = result.theorem_bound * result.fractional_objective;
  bool ok = result.integral_objective <= budget * (1.0 + 1e-6);
  if (kind.is_ratio() &&
      static_cast<int>(result.selection.size()) == kind.l) {
    // Stirling-improved bound for k = l.
    const double sharp =
        std::numbers::e * kind.l / static_cast<double>(kind.l - kind.l_prime);
    ok = ok && result.integral_objective <=
                   sharp * result.fractional_objective * (1.0 + 1e-6);
  }
  (void)frac;
  return ok;
}

}  // namespace interdesign
