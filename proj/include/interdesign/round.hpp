#pragma once

#include <vector>

#include "interdesign/family.hpp"
#include "interdesign/relax.hpp"

namespace interdesign {

/// Extended-real score of a node polynomial. The infinite value compares
/// strictly greater than every finite value; it stands in for the divide-by-
/// zero convention of the A and Ratio scores.
struct ObjectiveScore {
  bool is_infinite = false;
  double value = 0.0;

  static ObjectiveScore infinite() { return {true, 0.0}; }
  static ObjectiveScore finite(double v) { return {false, v}; }
};

bool score_less(const ObjectiveScore& a, const ObjectiveScore& b);

/// Per-objective selection score of a family polynomial:
///   E -> min_root(p)                                  (maximize)
///   D -> (-1)^d p(0)                                  (maximize)
///   A -> -p'(0)/p(0), infinite when p(0) = 0          (minimize)
///   Ratio(l',l) -> (-1)^{l'-l} c_{d-l'}/c_{d-l},
///                  infinite when c_{d-l} = 0          (minimize)
/// where c_j is the coefficient of x^j in p.
ObjectiveScore node_score(const RealRootedPoly& p, ObjectiveKind kind, int d,
                          double eps = 1e-9);

struct RoundingResult {
  std::vector<int> selection;  // k chosen indices, 0-based, multiset semantics
  double integral_objective = 0.0;    // minimization form
  double fractional_objective = 0.0;  // minimization form
  double certified_ratio = 0.0;       // integral / fractional
  double theorem_bound = 0.0;
};

/// Worst-case approximation ratio guaranteed by the rounding:
///   E -> (1 - sqrt((d-1)/k))^{-2}
///   D -> k * ((k-d)!/k!)^{1/d}
///   A -> k/(k-d+1)
///   Ratio(l',l) -> k * ((k-l)!/(k-l')!)^{1/(l-l')}
double theorem_bound(ObjectiveKind kind, int d, int k);

/// Greedy descent of the interlacing family: at each of the k levels evaluate
/// all m child polynomials and fix the argbest score (ties to the lowest
/// index). The selected child's score can never be worse than the parent's;
/// a violation beyond 1e-6 raises GuaranteeViolated. For E the vectors are
/// normalized by X^{-1/2} first (RankDeficient when X is singular).
///
/// The integral objective is recomputed directly from the selected vectors'
/// gram sum, never from polynomial coefficients.
RoundingResult round_design(const Instance& inst, const FractionalSolution& frac,
                            ObjectiveKind kind);

/// True iff integral <= theorem_bound * fractional * (1 + 1e-6), plus the
/// sharper e*l/(l-l') factor for Ratio when k = l.
bool certify(const RoundingResult& result, const FractionalSolution& frac,
             ObjectiveKind kind);

}  // namespace interdesign
