#include "interdesign/relax.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "interdesign/detail/simplex.hpp"

namespace interdesign {

ObjectiveKind ObjectiveKind::Ratio(int l_prime, int l) {
  if (l_prime < 0 || l_prime >= l) {
    throw InvalidInstance("ObjectiveKind: need 0 <= l' < l");
  }
  ObjectiveKind kind;
  kind.tag = Tag::Ratio;
  kind.l_prime = l_prime;
  kind.l = l;
  return kind;
}

std::pair<int, int> ObjectiveKind::ratio_pair(int d) const {
  switch (tag) {
    case Tag::D:
      return {0, d};
    case Tag::A:
      return {d - 1, d};
    case Tag::Ratio:
      return {l_prime, l};
    case Tag::E:
      throw InvalidInstance("ratio_pair: E has no coefficient-ratio form");
  }
  throw InvalidInstance("ratio_pair: bad tag");
}

void ObjectiveKind::validate(int d) const {
  if (tag == Tag::Ratio && !(0 <= l_prime && l_prime < l && l <= d)) {
    throw InvalidInstance("ObjectiveKind: need 0 <= l' < l <= d");
  }
}

void Instance::validate() const {
  if (d < 1) throw InvalidInstance("Instance: dimension must be >= 1");
  if (k < d) throw InvalidInstance("Instance: budget k must be >= d");
  if (vectors.rows() < 1) throw InvalidInstance("Instance: need at least one vector");
  if (vectors.cols() != d) throw InvalidInstance("Instance: vector dimension mismatch");
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

int effective_rank_target(ObjectiveKind kind, int d) {
  return kind.is_ratio() ? kind.l : d;
}

}  // namespace

double fractional_objective(const SymMatrix& X, ObjectiveKind kind) {
  const int d = X.dim();
  kind.validate(d);
  Spectrum sp = sym_eigen(X);
  const double lam_max = std::max(sp.eigenvalues(d - 1), 0.0);
  const double lam_min = sp.eigenvalues(0);
  switch (kind.tag) {
    case ObjectiveKind::Tag::D: {
      if (lam_min <= 1e-12 * std::max(lam_max, 1e-300)) {
        throw SingularMatrix("fractional_objective: singular X for D");
      }
      double log_det = 0.0;
      for (int i = 0; i < d; ++i) log_det += std::log(sp.eigenvalues(i));
      return std::exp(-log_det / d);
    }
    case ObjectiveKind::Tag::A: {
      return trace_inverse(X);
    }
    case ObjectiveKind::Tag::E: {
      if (lam_min <= 0.0) return kInf;
      return 1.0 / lam_min;
    }
    case ObjectiveKind::Tag::Ratio: {
      std::vector<double> lams(sp.eigenvalues.data(), sp.eigenvalues.data() + d);
      const std::vector<double> e = elementary_symmetric(lams);
      const double el = e[static_cast<std::size_t>(kind.l)];
      const double elp = e[static_cast<std::size_t>(kind.l_prime)];
      if (el <= 0.0 ||
          (kind.l == d && lam_min <= 1e-12 * std::max(lam_max, 1e-300))) {
        throw SingularMatrix("fractional_objective: singular X for Ratio");
      }
      return std::pow(elp / el, 1.0 / (kind.l - kind.l_prime));
    }
  }
  throw InvalidInstance("fractional_objective: bad tag");
}

FractionalSolution validate_fractional(const Instance& inst,
                                       std::span<const double> x,
                                       ObjectiveKind kind) {
  inst.validate();
  kind.validate(inst.d);
  const int m = inst.count();
  if (static_cast<int>(x.size()) != m) {
    throw InvalidInstance("validate_fractional: weight length mismatch");
  }
  std::vector<double> w(x.begin(), x.end());
  double sum = 0.0;
  for (double v : w) {
    if (v < 0.0) throw NegativeWeight("validate_fractional: negative weight");
    sum += v;
  }
  if (sum <= 0.0) throw ZeroSum("validate_fractional: weights sum to zero");
  for (double& v : w) v *= static_cast<double>(inst.k) / sum;

  FractionalSolution out;
  out.kind = kind;
  out.X = gram(w, inst.vectors);
  out.objective_value = fractional_objective(out.X, kind);
  out.x = std::move(w);
  return out;
}

namespace {

void check_feasible_rank(const Instance& inst, ObjectiveKind kind) {
  const int target = effective_rank_target(kind, inst.d);
  std::vector<double> uniform(static_cast<std::size_t>(inst.count()),
                              static_cast<double>(inst.k) / inst.count());
  Spectrum sp = sym_eigen(gram(uniform, inst.vectors));
  const double lam_max = std::max(sp.eigenvalues(inst.d - 1), 0.0);
  if (target == inst.d) {
    if (sp.eigenvalues(0) <= 1e-12 * std::max(lam_max, 1e-300)) {
      throw Infeasible("solve_relaxation: vectors do not span the space");
    }
  } else {
    std::vector<double> lams(sp.eigenvalues.data(), sp.eigenvalues.data() + inst.d);
    if (elementary_symmetric(lams)[static_cast<std::size_t>(target)] <= 0.0) {
      throw Infeasible("solve_relaxation: vectors have rank below l");
    }
  }
}

FractionalSolution finish(const Instance& inst, ObjectiveKind kind,
                          std::vector<double> x, bool certified,
                          double certificate, int iterations) {
  FractionalSolution out = validate_fractional(inst, x, kind);
  out.certified = certified;
  out.certificate = certificate;
  out.iterations = iterations;
  return out;
}

// Classical multiplicative-weights iteration for D-optimal design:
//   x_i <- x_i * (v_i^T X^{-1} v_i) * k / d,
// which preserves sum(x) = k and never decreases det(X)^{1/d}.
FractionalSolution solve_d(const Instance& inst, double tol, int max_iters,
                           std::vector<double>* trace) {
  const int m = inst.count();
  const int d = inst.d;
  const double k = inst.k;
  std::vector<double> x(static_cast<std::size_t>(m), k / m);
  double gmax = kInf;
  int it = 0;
  for (; it < max_iters; ++it) {
    SymMatrix X = gram(x, inst.vectors);
    if (trace) {
      trace->push_back(std::pow(std::max(det(X), 0.0), 1.0 / d));
    }
    const Eigen::MatrixXd Xinv =
        X.data().ldlt().solve(Eigen::MatrixXd::Identity(d, d));
    gmax = 0.0;
    Eigen::VectorXd g(m);
    for (int i = 0; i < m; ++i) {
      g(i) = inst.vectors.row(i) * Xinv * inst.vectors.row(i).transpose();
      gmax = std::max(gmax, g(i));
    }
    if (gmax <= (static_cast<double>(d) / k) * (1.0 + tol)) {
      return finish(inst, ObjectiveKind::D(), x, true, gmax, it);
    }
    double sum = 0.0;
    for (int i = 0; i < m; ++i) {
      x[static_cast<std::size_t>(i)] *= g(i) * k / d;
      sum += x[static_cast<std::size_t>(i)];
    }
    for (double& v : x) v *= k / sum;
  }
  return finish(inst, ObjectiveKind::D(), x, false, gmax, it);
}

// Multiplicative iteration for A-optimal design:
//   x_i <- x_i * sqrt(v_i^T X^{-2} v_i / (tr(X^{-1})/k)), renormalized.
FractionalSolution solve_a(const Instance& inst, double tol, int max_iters,
                           std::vector<double>* trace) {
  const int m = inst.count();
  const int d = inst.d;
  const double k = inst.k;
  std::vector<double> x(static_cast<std::size_t>(m), k / m);
  double resid = kInf;
  int it = 0;
  for (; it < max_iters; ++it) {
    SymMatrix X = gram(x, inst.vectors);
    const Eigen::MatrixXd Xinv =
        X.data().ldlt().solve(Eigen::MatrixXd::Identity(d, d));
    const Eigen::MatrixXd Xinv2 = Xinv * Xinv;
    const double target = Xinv.trace() / k;
    if (trace) trace->push_back(-Xinv.trace());
    double gmax = 0.0;
    Eigen::VectorXd g(m);
    for (int i = 0; i < m; ++i) {
      g(i) = inst.vectors.row(i) * Xinv2 * inst.vectors.row(i).transpose();
      gmax = std::max(gmax, g(i));
    }
    resid = gmax;
    if (gmax <= target * (1.0 + tol)) {
      return finish(inst, ObjectiveKind::A(), x, true, gmax, it);
    }
    double sum = 0.0;
    for (int i = 0; i < m; ++i) {
      x[static_cast<std::size_t>(i)] *= std::sqrt(g(i) / target);
      sum += x[static_cast<std::size_t>(i)];
    }
    for (double& v : x) v *= k / sum;
  }
  return finish(inst, ObjectiveKind::A(), x, false, resid, it);
}

// Kelley cutting-plane method for E-design. lambda_min(X(x)) is the pointwise
// minimum of the linear functions x -> sum_i x_i (v_i^T u)^2 over unit u, so
// each eigenvector cut is exact (zero intercept) and the master LP value is a
// true upper bound on the relaxation optimum. The master eliminates the
// budget equality through the last coordinate so all right-hand sides stay
// nonnegative and the slack basis is feasible.
FractionalSolution solve_e(const Instance& inst, double tol, int max_iters,
                           std::vector<double>* trace) {
  const int m = inst.count();
  const int d = inst.d;
  const double k = inst.k;

  std::vector<Eigen::VectorXd> cuts;
  std::vector<double> x(static_cast<std::size_t>(m), k / m);
  std::vector<double> best_x = x;
  double best_val = -kInf;
  double gap = kInf;
  int it = 0;

  const int outer_cap = std::min(max_iters, 5000);
  for (; it < outer_cap; ++it) {
    Spectrum sp = sym_eigen(gram(x, inst.vectors));
    const double lam_min = sp.eigenvalues(0);
    const double lam_max = sp.eigenvalues(d - 1);
    if (lam_min > best_val) {
      best_val = lam_min;
      best_x = x;
    }
    if (trace) trace->push_back(best_val);
    for (int j = 0; j < d; ++j) {
      if (sp.eigenvalues(j) > lam_min + 1e-8 * std::max(1.0, lam_max)) break;
      Eigen::VectorXd cut(m);
      for (int i = 0; i < m; ++i) {
        const double dot = inst.vectors.row(i) * sp.eigenvectors.col(j);
        cut(i) = dot * dot;
      }
      cuts.push_back(std::move(cut));
    }

    // Master LP over z = (x_1..x_{m-1}, t) >= 0 with x_m eliminated.
    const int rows = static_cast<int>(cuts.size()) + 1;
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(rows, m);
    Eigen::VectorXd b(rows);
    A.row(0).head(m - 1).setOnes();
    b(0) = k;
    for (std::size_t j = 0; j < cuts.size(); ++j) {
      const int r = static_cast<int>(j) + 1;
      for (int i = 0; i + 1 < m; ++i) A(r, i) = cuts[j](m - 1) - cuts[j](i);
      A(r, m - 1) = 1.0;
      b(r) = k * cuts[j](m - 1);
    }
    Eigen::VectorXd c = Eigen::VectorXd::Zero(m);
    c(m - 1) = 1.0;
    detail::LpResult lp = detail::simplex_max(A, b, c);
    if (lp.status != detail::LpResult::Status::Optimal) break;

    const double upper = lp.value;
    gap = upper - best_val;
    if (gap <= tol * std::max(best_val, 1e-300)) {
      return finish(inst, ObjectiveKind::E(), best_x, true, gap, it);
    }
    for (int i = 0; i + 1 < m; ++i) x[static_cast<std::size_t>(i)] = std::max(lp.x(i), 0.0);
    double head = 0.0;
    for (int i = 0; i + 1 < m; ++i) head += x[static_cast<std::size_t>(i)];
    x[static_cast<std::size_t>(m - 1)] = std::max(k - head, 0.0);
  }
  return finish(inst, ObjectiveKind::E(), best_x, false, gap, it);
}

struct RatioEval {
  double phi = kInf;       // log E_{l'} - log E_l (phi of the minimization)
  bool valid = false;
  Eigen::VectorXd grad;    // per-index derivative, valid only when requested
};

// e_{j}(lambda with index i removed) for all i, via the subtraction-free
// forward/backward DP.
Eigen::MatrixXd leave_one_out_esym(const Eigen::VectorXd& lams, int j_max) {
  const int d = static_cast<int>(lams.size());
  // fwd[i][j] = e_j(lams[0..i-1]), bwd[i][j] = e_j(lams[i..d-1])
  Eigen::MatrixXd fwd = Eigen::MatrixXd::Zero(d + 1, j_max + 1);
  Eigen::MatrixXd bwd = Eigen::MatrixXd::Zero(d + 1, j_max + 1);
  fwd(0, 0) = 1.0;
  for (int i = 0; i < d; ++i) {
    fwd(i + 1, 0) = 1.0;
    for (int j = 1; j <= j_max; ++j) {
      fwd(i + 1, j) = fwd(i, j) + lams(i) * fwd(i, j - 1);
    }
  }
  bwd(d, 0) = 1.0;
  for (int i = d - 1; i >= 0; --i) {
    bwd(i, 0) = 1.0;
    for (int j = 1; j <= j_max; ++j) {
      bwd(i, j) = bwd(i + 1, j) + lams(i) * bwd(i + 1, j - 1);
    }
  }
  Eigen::MatrixXd out(d, j_max + 1);  // out(i, j) = e_j(lams minus lams[i])
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j <= j_max; ++j) {
      double acc = 0.0;
      for (int a = 0; a <= j; ++a) acc += fwd(i, a) * bwd(i + 1, j - a);
      out(i, j) = acc;
    }
  }
  return out;
}

RatioEval eval_ratio(const Instance& inst, const std::vector<double>& x,
                     int l_prime, int l, bool want_grad) {
  RatioEval out;
  Spectrum sp = sym_eigen(gram(x, inst.vectors));
  std::vector<double> lams(sp.eigenvalues.data(), sp.eigenvalues.data() + inst.d);
  const std::vector<double> e = elementary_symmetric(lams);
  const double el = e[static_cast<std::size_t>(l)];
  const double elp = e[static_cast<std::size_t>(l_prime)];
  if (!(el > 0.0) || !(elp > 0.0)) return out;
  out.phi = std::log(elp) - std::log(el);
  out.valid = true;
  if (!want_grad) return out;

  const Eigen::MatrixXd loo = leave_one_out_esym(sp.eigenvalues, std::max(l, 1) - 1);
  Eigen::VectorXd h(inst.d);
  for (int i = 0; i < inst.d; ++i) {
    const double dlp = l_prime > 0 ? loo(i, l_prime - 1) : 0.0;
    h(i) = dlp / elp - loo(i, l - 1) / el;
  }
  const Eigen::MatrixXd G =
      sp.eigenvectors * h.asDiagonal() * sp.eigenvectors.transpose();
  out.grad.resize(inst.count());
  for (int i = 0; i < inst.count(); ++i) {
    out.grad(i) = inst.vectors.row(i) * G * inst.vectors.row(i).transpose();
  }
  return out;
}

// Pairwise Frank-Wolfe with golden-section line search on the convex
// objective log E_{l'}(X) - log E_l(X) over the scaled simplex.
FractionalSolution solve_ratio(const Instance& inst, ObjectiveKind kind,
                               double tol, int max_iters,
                               std::vector<double>* trace) {
  const int m = inst.count();
  const double k = inst.k;
  const int lp = kind.l_prime;
  const int l = kind.l;
  const double inv_gap_exp = 1.0 / (l - lp);

  std::vector<double> x(static_cast<std::size_t>(m), k / m);
  double fw_gap = kInf;
  int it = 0;
  for (; it < max_iters; ++it) {
    RatioEval cur = eval_ratio(inst, x, lp, l, true);
    if (!cur.valid) {
      throw NumericalFailure("solve_relaxation: ratio objective left its domain");
    }
    if (trace) trace->push_back(-cur.phi);
    int to = 0, away = -1;
    for (int i = 1; i < m; ++i) {
      if (cur.grad(i) < cur.grad(to)) to = i;
    }
    double dot = 0.0;
    for (int i = 0; i < m; ++i) {
      dot += cur.grad(i) * x[static_cast<std::size_t>(i)];
      if (x[static_cast<std::size_t>(i)] > 1e-14 &&
          (away < 0 || cur.grad(i) > cur.grad(away))) {
        away = i;
      }
    }
    fw_gap = dot - k * cur.grad(to);
    const double objective = std::exp(cur.phi * inv_gap_exp);
    if (fw_gap <= tol * objective || away == to) {
      return finish(inst, kind, x, fw_gap <= tol * objective, fw_gap, it);
    }

    // Move mass from the worst in-support atom to the best vertex.
    const double step_max = x[static_cast<std::size_t>(away)];
    auto phi_at = [&](double gamma) {
      std::vector<double> y = x;
      y[static_cast<std::size_t>(away)] -= gamma;
      y[static_cast<std::size_t>(to)] += gamma;
      RatioEval e2 = eval_ratio(inst, y, lp, l, false);
      return e2.valid ? e2.phi : kInf;
    };
    constexpr double kGolden = 0.6180339887498949;
    double lo = 0.0, hi = step_max;
    double m1 = hi - kGolden * (hi - lo), m2 = lo + kGolden * (hi - lo);
    double f1 = phi_at(m1), f2 = phi_at(m2);
    for (int rounds = 0; rounds < 60 && hi - lo > 1e-14 * std::max(1.0, step_max);
         ++rounds) {
      if (f1 <= f2) {
        hi = m2;
        m2 = m1;
        f2 = f1;
        m1 = hi - kGolden * (hi - lo);
        f1 = phi_at(m1);
      } else {
        lo = m1;
        m1 = m2;
        f1 = f2;
        m2 = lo + kGolden * (hi - lo);
        f2 = phi_at(m2);
      }
    }
    double gamma = (f1 <= f2) ? m1 : m2;
    if (phi_at(step_max) <= std::min(f1, f2)) gamma = step_max;  // drop step
    if (gamma <= 0.0) gamma = std::min(step_max, 1e-12);
    x[static_cast<std::size_t>(away)] -= gamma;
    x[static_cast<std::size_t>(to)] += gamma;
    if (x[static_cast<std::size_t>(away)] < 1e-15) {
      x[static_cast<std::size_t>(to)] += x[static_cast<std::size_t>(away)];
      x[static_cast<std::size_t>(away)] = 0.0;
    }
  }
  return finish(inst, kind, x, false, fw_gap, it);
}

}  // namespace

FractionalSolution solve_relaxation(const Instance& inst, ObjectiveKind kind,
                                    double tol, int max_iters,
                                    std::vector<double>* objective_trace) {
  inst.validate();
  kind.validate(inst.d);
  if (tol <= 0.0) throw InvalidInstance("solve_relaxation: tol must be positive");
  if (max_iters < 1) throw InvalidInstance("solve_relaxation: max_iters must be >= 1");
  check_feasible_rank(inst, kind);
  switch (kind.tag) {
    case ObjectiveKind::Tag::D:
      return solve_d(inst, tol, max_iters, objective_trace);
    case ObjectiveKind::Tag::A:
      return solve_a(inst, tol, max_iters, objective_trace);
    case ObjectiveKind::Tag::E:
      return solve_e(inst, tol, max_iters, objective_trace);
    case ObjectiveKind::Tag::Ratio:
      return solve_ratio(inst, kind, tol, max_iters, objective_trace);
  }
  throw InvalidInstance("solve_relaxation: bad tag");
}

}  // namespace interdesign
