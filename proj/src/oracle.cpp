#include "interdesign/oracle.hpp"

#include <cmath>
#include <limits>

namespace interdesign {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double leaf_objective(const Eigen::VectorXd& lams, ObjectiveKind kind, int d) {
  const double lam_min = lams(0);
  switch (kind.tag) {
    case ObjectiveKind::Tag::D: {
      if (lam_min <= 0.0) return kInf;
      double log_det = 0.0;
      for (int i = 0; i < d; ++i) log_det += std::log(lams(i));
      return std::exp(-log_det / d);
    }
    case ObjectiveKind::Tag::A: {
      if (lam_min <= 0.0) return kInf;
      double acc = 0.0;
      for (int i = 0; i < d; ++i) acc += 1.0 / lams(i);
      return acc;
    }
    case ObjectiveKind::Tag::E:
      return lam_min > 0.0 ? 1.0 / lam_min : kInf;
    case ObjectiveKind::Tag::Ratio: {
      std::vector<double> v(lams.data(), lams.data() + d);
      const std::vector<double> e = elementary_symmetric(v);
      const double el = e[static_cast<std::size_t>(kind.l)];
      if (el <= 0.0) return kInf;
      return std::pow(e[static_cast<std::size_t>(kind.l_prime)] / el,
                      1.0 / (kind.l - kind.l_prime));
    }
  }
  return kInf;
}

}  // namespace

LeafTable enumerate_leaves(const FamilyContext& ctx) {
  const int m = ctx.count();
  const int k = ctx.k;
  const int d = ctx.dim();
  double total = 1.0;
  for (int i = 0; i < k; ++i) {
    total *= m;
    if (total > 1e6) throw TooLarge("enumerate_leaves: m^k exceeds 10^6");
  }
  const std::vector<double> p = children_weights(ctx);

  LeafTable table;
  table.m = m;
  table.k = k;
  table.d = d;
  table.leaves.reserve(static_cast<std::size_t>(total));

  std::vector<int> idx(static_cast<std::size_t>(k), 0);
  while (true) {
    Leaf leaf;
    leaf.indices = idx;
    SymMatrix A = SymMatrix::zero(d);
    double prob = 1.0;
    for (int j : idx) {
      A.rank_one_update(ctx.vectors.row(j).transpose());
      prob *= p[static_cast<std::size_t>(j)];
    }
    Spectrum sp = sym_eigen(A);
    leaf.eigenvalues = sp.eigenvalues;
    std::vector<double> roots(sp.eigenvalues.data(), sp.eigenvalues.data() + d);
    leaf.poly = RealRootedPoly::from_roots(roots);
    leaf.probability = prob;
    table.leaves.push_back(std::move(leaf));

    int pos = k - 1;
    while (pos >= 0 && idx[static_cast<std::size_t>(pos)] == m - 1) {
      idx[static_cast<std::size_t>(pos)] = 0;
      --pos;
    }
    if (pos < 0) break;
    ++idx[static_cast<std::size_t>(pos)];
  }
  return table;
}

RealRootedPoly exact_expected_poly(const LeafTable& table,
                                   std::span<const int> prefix) {
  if (static_cast<int>(prefix.size()) > table.k) {
    throw InvalidInstance("exact_expected_poly: prefix longer than k");
  }
  std::vector<double> coeffs(static_cast<std::size_t>(table.d) + 1, 0.0);
  double total = 0.0;
  for (const Leaf& leaf : table.leaves) {
    bool match = true;
    for (std::size_t i = 0; i < prefix.size(); ++i) {
      if (leaf.indices[i] != prefix[i]) {
        match = false;
        break;
      }
    }
    if (!match) continue;
    total += leaf.probability;
    for (std::size_t i = 0; i < coeffs.size(); ++i) {
      coeffs[i] += leaf.probability * leaf.poly.coeffs[i];
    }
  }
  if (total <= 0.0) {
    throw ZeroProbability("exact_expected_poly: prefix has zero probability");
  }
  for (double& c : coeffs) c /= total;
  return RealRootedPoly(std::move(coeffs));
}

std::pair<std::vector<int>, double> best_leaf(const LeafTable& table,
                                              ObjectiveKind kind) {
  kind.validate(table.d);
  const Leaf* best = nullptr;
  double best_val = kInf;
  for (const Leaf& leaf : table.leaves) {
    const double val = leaf_objective(leaf.eigenvalues, kind, table.d);
    if (best == nullptr || val < best_val) {
      best = &leaf;
      best_val = val;
    }
  }
  return {best->indices, best_val};
}

double expected_lambda_min(const LeafTable& table) {
  double acc = 0.0;
  for (const Leaf& leaf : table.leaves) {
    acc += leaf.probability * leaf.eigenvalues(0);
  }
  return acc;
}

}  // namespace interdesign
