#pragma once

#include <span>
#include <utility>
#include <vector>

#include "interdesign/family.hpp"
#include "interdesign/relax.hpp"

namespace interdesign {

/// One leaf of the fully enumerated family tree.
struct Leaf {
  std::vector<int> indices;  // length k, 0-based
  RealRootedPoly poly;       // characteristic polynomial of the leaf gram
  double probability = 0.0;  // prod_j x(s_j)/k
  Eigen::VectorXd eigenvalues;
};

/// Ground-truth table of all m^k leaves of a tiny instance.
struct LeafTable {
  int m = 0, k = 0, d = 0;
  std::vector<Leaf> leaves;  // lexicographic by index sequence
};

/// Enumerates every leaf. Guarded by m^k <= 10^6 (TooLarge).
LeafTable enumerate_leaves(const FamilyContext& ctx);

/// Probability-weighted average of the leaf polynomials consistent with the
/// prefix, renormalized by the prefix probability. This is the brute-force
/// counterpart of conditional_expected_charpoly. Raises ZeroProbability when
/// the prefix has zero sampling probability.
RealRootedPoly exact_expected_poly(const LeafTable& table,
                                   std::span<const int> prefix);

/// The leaf minimizing the minimization-form objective, with its value.
std::pair<std::vector<int>, double> best_leaf(const LeafTable& table,
                                              ObjectiveKind kind);

/// sum over leaves of probability * lambda_min(leaf gram).
double expected_lambda_min(const LeafTable& table);

}  // namespace interdesign
