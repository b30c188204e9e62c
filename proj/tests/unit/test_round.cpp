#include <cmath>
#include <numbers>

#include <doctest.h>

#include "interdesign/io.hpp"
#include "interdesign/oracle.hpp"
#include "interdesign/round.hpp"

using namespace interdesign;

namespace {

Instance basis_pair() {
  Instance inst;
  inst.d = 2;
  inst.k = 2;
  inst.vectors = Eigen::MatrixXd::Identity(2, 2);
  return inst;
}

}  // namespace

TEST_CASE("score ordering with the infinite sentinel") {
  const ObjectiveScore inf = ObjectiveScore::infinite();
  CHECK(score_less(ObjectiveScore::finite(1e300), inf));
  CHECK_FALSE(score_less(inf, ObjectiveScore::finite(1e300)));
  CHECK_FALSE(score_less(inf, inf));
  CHECK(score_less(ObjectiveScore::finite(1.0), ObjectiveScore::finite(2.0)));
}

TEST_CASE("node_score") {
  const RealRootedPoly p({2.0, -3.0, 1.0});  // (x-1)(x-2)
  SUBCASE("A-score is the trace of the inverse on the roots") {
    const ObjectiveScore s = node_score(p, ObjectiveKind::A(), 2);
    REQUIRE_FALSE(s.is_infinite);
    CHECK(s.value == doctest::Approx(1.5));
  }
  SUBCASE("D-score is the product of the roots") {
    const ObjectiveScore s = node_score(p, ObjectiveKind::D(), 2);
    CHECK(s.value == doctest::Approx(2.0));
  }
  SUBCASE("E-score is the minimum root") {
    CHECK(node_score(p, ObjectiveKind::E(), 2).value == doctest::Approx(1.0));
  }
  SUBCASE("ratio score from coefficients") {
    // roots 1,2,3: E1 = 6, E2 = 11
    const RealRootedPoly q({-6.0, 11.0, -6.0, 1.0});
    const ObjectiveScore s = node_score(q, ObjectiveKind::Ratio(1, 2), 3);
    CHECK(s.value == doctest::Approx(6.0 / 11.0));
  }
  SUBCASE("sentinel when the denominator coefficient vanishes") {
    const RealRootedPoly q({0.0, 0.0, 1.0});  // x^2, p(0) = 0
    CHECK(node_score(q, ObjectiveKind::A(), 2).is_infinite);
  }
  SUBCASE("degree mismatch") {
    CHECK_THROWS_AS((void)node_score(p, ObjectiveKind::D(), 3), DegreeMismatch);
  }
}

TEST_CASE("theorem_bound") {
  SUBCASE("D at k=d stays below e") {
    for (int d = 1; d <= 10; ++d) {
      double fact = 1.0;
      for (int j = 2; j <= d; ++j) fact *= j;
      const double b = theorem_bound(ObjectiveKind::D(), d, d);
      CHECK(b == doctest::Approx(d * std::pow(1.0 / fact, 1.0 / d)));
      CHECK(b <= std::numbers::e + 1e-12);
    }
  }
  SUBCASE("E at k=d grows as d^2") {
    // (1 - sqrt((d-1)/d))^{-2} sits between d^2 and 4d^2
    for (int d = 2; d <= 8; ++d) {
      const double b = theorem_bound(ObjectiveKind::E(), d, d);
      CHECK(b >= static_cast<double>(d) * d - 1e-9);
      CHECK(b <= 4.0 * d * d + 1e-9);
    }
  }
  SUBCASE("A direct formula") {
    CHECK(theorem_bound(ObjectiveKind::A(), 2, 3) == doctest::Approx(1.5));
  }
  SUBCASE("ratio specializes to D and A") {
    CHECK(theorem_bound(ObjectiveKind::Ratio(0, 3), 3, 7) ==
          doctest::Approx(theorem_bound(ObjectiveKind::D(), 3, 7)));
    CHECK(theorem_bound(ObjectiveKind::Ratio(2, 3), 3, 7) ==
          doctest::Approx(theorem_bound(ObjectiveKind::A(), 3, 7)));
  }
}

TEST_CASE("round_design on tiny instances") {
  SUBCASE("scalar instance with all weight on the larger vector") {
    Instance inst;
    inst.d = 1;
    inst.k = 2;
    inst.vectors.resize(2, 1);
    inst.vectors << 1, 2;
    std::vector<double> x = {0.0, 2.0};
    for (ObjectiveKind kind :
         {ObjectiveKind::E(), ObjectiveKind::D(), ObjectiveKind::A()}) {
      FractionalSolution f = validate_fractional(inst, x, kind);
      RoundingResult r = round_design(inst, f, kind);
      CHECK(r.selection == std::vector<int>{1, 1});
      CHECK(certify(r, f, kind));
    }
    FractionalSolution f = validate_fractional(inst, x, ObjectiveKind::E());
    RoundingResult r = round_design(inst, f, ObjectiveKind::E());
    CHECK(1.0 / r.integral_objective == doctest::Approx(8.0));
  }
  SUBCASE("basis pair, D") {
    const Instance inst = basis_pair();
    std::vector<double> x = {1.0, 1.0};
    FractionalSolution f = validate_fractional(inst, x, ObjectiveKind::D());
    RoundingResult r = round_design(inst, f, ObjectiveKind::D());
    std::vector<int> sorted = r.selection;
    std::sort(sorted.begin(), sorted.end());
    CHECK(sorted == std::vector<int>{0, 1});
    CHECK(std::pow(r.integral_objective, -2.0) == doctest::Approx(1.0));
    CHECK(r.certified_ratio <= std::sqrt(2.0) + 1e-9);
  }
  SUBCASE("basis pair, E") {
    const Instance inst = basis_pair();
    std::vector<double> x = {1.0, 1.0};
    FractionalSolution f = validate_fractional(inst, x, ObjectiveKind::E());
    RoundingResult r = round_design(inst, f, ObjectiveKind::E());
    const double gamma = std::pow(1.0 - std::sqrt(0.5), 2.0);
    CHECK(1.0 / r.integral_objective == doctest::Approx(1.0));
    CHECK(1.0 / r.integral_objective >= gamma * 1.0 - 1e-9);
  }
}

TEST_CASE("round_design rejects a rank-deficient E normalization") {
  Instance inst;
  inst.d = 2;
  inst.k = 2;
  inst.vectors.resize(2, 2);
  inst.vectors << 1, 0, 2, 0;
  std::vector<double> x = {1.0, 1.0};
  FractionalSolution f = validate_fractional(inst, x, ObjectiveKind::E());
  CHECK_THROWS_AS((void)round_design(inst, f, ObjectiveKind::E()),
                  RankDeficient);
}

TEST_CASE("leaf score equals the matrix objective of the selection") {
  const Instance inst = make_gaussian(3, 4, 6, 71);
  for (ObjectiveKind kind : {ObjectiveKind::D(), ObjectiveKind::A(),
                             ObjectiveKind::E(), ObjectiveKind::Ratio(1, 3)}) {
    FractionalSolution f = solve_relaxation(inst, kind, 1e-7);
    RoundingResult r = round_design(inst, f, kind);
    std::vector<double> ones(r.selection.size(), 1.0);
    Eigen::MatrixXd rows(static_cast<Eigen::Index>(r.selection.size()), 3);
    for (std::size_t i = 0; i < r.selection.size(); ++i) {
      rows.row(static_cast<Eigen::Index>(i)) = inst.vectors.row(r.selection[i]);
    }
    CHECK(r.integral_objective ==
          doctest::Approx(fractional_objective(gram(ones, rows), kind))
              .epsilon(1e-7));
    CHECK(certify(r, f, kind));
  }
}

TEST_CASE("root polynomial value identities") {
  const Instance inst = make_gaussian(3, 5, 7, 72);
  std::vector<double> x(7, 5.0 / 7.0);
  FamilyContext ctx(inst.vectors, x, 5);
  const RealRootedPoly f0 =
      conditional_expected_charpoly(ctx, PartialSelection::root(3));
  const SymMatrix X = gram(x, inst.vectors);
  const int d = 3, k = 5;

  SUBCASE("constant coefficient against det(X)") {
    double fact = 1.0;  // k!/(k-d)! = 5*4*3
    for (int j = k - d + 1; j <= k; ++j) fact *= j;
    const double expect = fact / std::pow(k, d) * det(X);
    const double sign = (d % 2 == 0) ? 1.0 : -1.0;
    CHECK(sign * f0.coeffs[0] == doctest::Approx(expect).epsilon(1e-8));
  }
  SUBCASE("linear coefficient bound against tr(X^-1)") {
    const double lhs = -f0.coeffs[1] / f0.coeffs[0];
    CHECK(lhs <= static_cast<double>(k) / (k - d + 1) * trace_inverse(X) + 1e-8);
  }
  SUBCASE("ratio score identity") {
    for (auto [lp, l] : {std::pair{0, 2}, std::pair{1, 3}, std::pair{1, 2}}) {
      const ObjectiveScore s = node_score(f0, ObjectiveKind::Ratio(lp, l), d);
      Spectrum sp = sym_eigen(X);
      std::vector<double> lams(sp.eigenvalues.data(), sp.eigenvalues.data() + d);
      const std::vector<double> e = elementary_symmetric(lams);
      double factor = 1.0;  // (k-l)! k^l / ((k-l')! k^l')
      for (int j = k - l + 1; j <= k - lp; ++j) factor /= j;
      factor *= std::pow(k, l - lp);
      const double expect = factor * e[static_cast<std::size_t>(lp)] /
                            e[static_cast<std::size_t>(l)];
      REQUIRE_FALSE(s.is_infinite);
      CHECK(s.value == doctest::Approx(expect).epsilon(1e-8));
    }
  }
}

TEST_CASE("rounding is deterministic") {
  const Instance inst = make_gaussian(3, 6, 9, 73);
  FractionalSolution f = solve_relaxation(inst, ObjectiveKind::A(), 1e-7);
  RoundingResult r1 = round_design(inst, f, ObjectiveKind::A());
  RoundingResult r2 = round_design(inst, f, ObjectiveKind::A());
  CHECK(r1.selection == r2.selection);
  CHECK(r1.integral_objective == r2.integral_objective);
}

TEST_CASE("greedy sits between the root score and the best leaf") {
  const Instance inst = make_gaussian(2, 3, 4, 74);
  for (ObjectiveKind kind :
       {ObjectiveKind::D(), ObjectiveKind::A(), ObjectiveKind::E()}) {
    FractionalSolution f = solve_relaxation(inst, kind, 1e-7);
    RoundingResult r = round_design(inst, f, kind);
    // never better than exhaustive search over leaves with uniform weights
    std::vector<double> uniform(4, 3.0 / 4.0);
    FamilyContext uctx(inst.vectors, uniform, 3);
    const auto [indices, best] = best_leaf(enumerate_leaves(uctx), kind);
    CHECK(r.integral_objective >= best - 1e-9 * std::max(1.0, best));
    // and never worse than the theorem budget
    CHECK(r.integral_objective <=
          r.theorem_bound * r.fractional_objective * (1.0 + 1e-6));
  }
}
