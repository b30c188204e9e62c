#include <cmath>

#include <doctest.h>

#include "interdesign/io.hpp"
#include "interdesign/oracle.hpp"
#include "interdesign/round.hpp"

using namespace interdesign;

namespace {

FamilyContext scalar_ctx() {
  Eigen::MatrixXd v(2, 1);
  v << 1.0, 2.0;
  return FamilyContext(v, {1.0, 1.0}, 2);
}

}  // namespace

TEST_CASE("enumerate_leaves") {
  SUBCASE("single vector") {
    Eigen::MatrixXd v(1, 1);
    v << 1.0;
    const LeafTable t = enumerate_leaves(FamilyContext(v, {2.0}, 2));
    REQUIRE(t.leaves.size() == 1);
    CHECK(t.leaves[0].probability == doctest::Approx(1.0));
  }
  SUBCASE("two vectors, k = 2: four uniform leaves") {
    const LeafTable t = enumerate_leaves(scalar_ctx());
    REQUIRE(t.leaves.size() == 4);
    for (const Leaf& leaf : t.leaves) {
      CHECK(leaf.probability == doctest::Approx(0.25));
    }
  }
  SUBCASE("expected minimum eigenvalue of the scalar instance") {
    // leaves: {1,1} -> 2, {1,2}/{2,1} -> 5, {2,2} -> 8
    CHECK(expected_lambda_min(enumerate_leaves(scalar_ctx())) ==
          doctest::Approx(5.0));
  }
  SUBCASE("size guard") {
    Instance inst = make_basis_copies(2, 30, 4);
    std::vector<double> x(4, 30.0 / 4.0);
    FamilyContext ctx(inst.vectors, x, 30);
    CHECK_THROWS_AS((void)enumerate_leaves(ctx), TooLarge);
  }
}

TEST_CASE("exact_expected_poly") {
  const LeafTable t = enumerate_leaves(scalar_ctx());
  SUBCASE("full prefix returns the leaf polynomial") {
    std::vector<int> prefix = {1, 0};
    const RealRootedPoly p = exact_expected_poly(t, prefix);
    REQUIRE(p.degree() == 1);
    CHECK(p.coeffs[0] == doctest::Approx(-5.0));
  }
  SUBCASE("root expectation x - 5 matches the closed form with X = 5") {
    const RealRootedPoly p = exact_expected_poly(t, {});
    REQUIRE(p.degree() == 1);
    CHECK(p.coeffs[0] == doctest::Approx(-5.0));
    std::vector<double> eigs = {5.0};
    const RealRootedPoly closed = root_poly_closed_form(eigs, 2, 1);
    CHECK(p.coeffs[0] == doctest::Approx(closed.coeffs[0]));
  }
  SUBCASE("prefix (1) gives x - 3.5") {
    std::vector<int> prefix = {0};
    CHECK(exact_expected_poly(t, prefix).coeffs[0] == doctest::Approx(-3.5));
  }
  SUBCASE("zero probability prefix") {
    Eigen::MatrixXd v(2, 1);
    v << 1.0, 2.0;
    FamilyContext ctx(v, {0.0, 2.0}, 2);
    const LeafTable t0 = enumerate_leaves(ctx);
    std::vector<int> prefix = {0};
    CHECK_THROWS_AS((void)exact_expected_poly(t0, prefix), ZeroProbability);
  }
}

TEST_CASE("exact expectation satisfies the tree recursion") {
  const Instance inst = make_gaussian(2, 3, 3, 81);
  std::vector<double> x = {0.8, 1.4, 0.8};
  FamilyContext ctx(inst.vectors, x, 3);
  const LeafTable t = enumerate_leaves(ctx);
  const std::vector<double> p = children_weights(ctx);

  double total = 0.0;
  for (const Leaf& leaf : t.leaves) total += leaf.probability;
  CHECK(total == doctest::Approx(1.0).epsilon(1e-10));

  std::vector<std::vector<int>> prefixes = {{}, {0}, {1}, {2}, {1, 2}, {0, 0}};
  for (const auto& prefix : prefixes) {
    const RealRootedPoly parent = exact_expected_poly(t, prefix);
    std::vector<double> acc(parent.coeffs.size(), 0.0);
    for (int s = 0; s < 3; ++s) {
      auto child = prefix;
      child.push_back(s);
      const RealRootedPoly cp = exact_expected_poly(t, child);
      for (std::size_t i = 0; i < acc.size(); ++i) {
        acc[i] += p[static_cast<std::size_t>(s)] * cp.coeffs[i];
      }
    }
    for (std::size_t i = 0; i < acc.size(); ++i) {
      CHECK(acc[i] == doctest::Approx(parent.coeffs[i]).epsilon(1e-9));
    }
  }
}

TEST_CASE("best_leaf") {
  SUBCASE("scalar instance, E: both copies of the larger vector") {
    const auto [indices, value] =
        best_leaf(enumerate_leaves(scalar_ctx()), ObjectiveKind::E());
    CHECK(indices == std::vector<int>{1, 1});
    CHECK(1.0 / value == doctest::Approx(8.0));
  }
  SUBCASE("basis pair, D: a mixed pair with det 1") {
    Instance inst = make_basis_copies(2, 2, 2);
    std::vector<double> x = {1.0, 1.0};
    FamilyContext ctx(inst.vectors, x, 2);
    const auto [indices, value] =
        best_leaf(enumerate_leaves(ctx), ObjectiveKind::D());
    CHECK(indices[0] != indices[1]);
    CHECK(value == doctest::Approx(1.0));
  }
  SUBCASE("two copies of each basis direction, E: any mixed pair") {
    Instance inst = make_basis_copies(2, 2, 4);
    std::vector<double> x(4, 0.5);
    FamilyContext ctx(inst.vectors, x, 2);
    const auto [indices, value] =
        best_leaf(enumerate_leaves(ctx), ObjectiveKind::E());
    CHECK(1.0 / value == doctest::Approx(1.0));
  }
}

TEST_CASE("basis-copies expected minimum eigenvalue counts full coverage") {
  SUBCASE("d = 2") {
    Instance inst = make_basis_copies(2, 2, 2);
    std::vector<double> x = {1.0, 1.0};
    FamilyContext ctx(inst.vectors, x, 2);
    CHECK(expected_lambda_min(enumerate_leaves(ctx)) == doctest::Approx(0.5));
  }
  SUBCASE("d = 3") {
    Instance inst = make_basis_copies(3, 3, 3);
    std::vector<double> x = {1.0, 1.0, 1.0};
    FamilyContext ctx(inst.vectors, x, 3);
    CHECK(expected_lambda_min(enumerate_leaves(ctx)) ==
          doctest::Approx(6.0 / 27.0));
  }
}

TEST_CASE("all leaf polynomials have nonnegative real roots") {
  const Instance inst = make_gaussian(2, 3, 4, 82);
  std::vector<double> x(4, 3.0 / 4.0);
  FamilyContext ctx(inst.vectors, x, 3);
  for (const Leaf& leaf : enumerate_leaves(ctx).leaves) {
    CHECK(leaf.eigenvalues(0) >= -1e-10);
    CHECK(min_root(leaf.poly) >= -1e-8);
  }
}
