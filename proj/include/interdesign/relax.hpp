#pragma once

#include <optional>
#include <span>
#include <vector>

#include "interdesign/linalg.hpp"

namespace interdesign {

/// Which design objective a relaxation or rounding run targets.
///
/// Ratio(l', l) with 0 <= l' < l <= d is the generalized ratio objective
/// (E_{l'}(M)/E_l(M))^{1/(l-l')} on the elementary symmetric polynomials of
/// the eigenvalues. Ratio(0, d) coincides with D and Ratio(d-1, d) with A.
struct ObjectiveKind {
  enum class Tag { D, A, E, Ratio };

  Tag tag = Tag::D;
  int l_prime = 0;  // Ratio only
  int l = 0;        // Ratio only

  static ObjectiveKind D() { return {Tag::D, 0, 0}; }
  static ObjectiveKind A() { return {Tag::A, 0, 0}; }
  static ObjectiveKind E() { return {Tag::E, 0, 0}; }
  static ObjectiveKind Ratio(int l_prime, int l);

  bool is_ratio() const { return tag == Tag::Ratio; }
  /// The (l', l) pair driving the coefficient-ratio score; D maps to (0, d)
  /// and A to (d-1, d).
  std::pair<int, int> ratio_pair(int d) const;
  /// Validates the Ratio index pair against the ambient dimension.
  void validate(int d) const;
};

struct Instance {
  int d = 0;
  int k = 0;
  Eigen::MatrixXd vectors;  // m x d, rows are the candidate vectors

  int count() const { return static_cast<int>(vectors.rows()); }
  /// Checks k >= d >= 1, m >= 1 and the vector dimension.
  void validate() const;
};

/// A feasible point of the convex relaxation: nonnegative weights summing to
/// exactly k, the aggregate matrix X = sum x(i) v_i v_i^T, and the objective
/// value in minimization form.
struct FractionalSolution {
  std::vector<double> x;
  SymMatrix X = SymMatrix::zero(1);
  double objective_value = 0.0;
  ObjectiveKind kind;
  /// True when the solver's first-order certificate held at the requested
  /// tolerance; false when the iteration limit was hit first.
  bool certified = true;
  /// The certificate residual at return (solver-specific, see solve_relaxation).
  double certificate = 0.0;
  int iterations = 0;
};

/// Objective value of X in minimization form:
///   D -> det(X)^{-1/d},  A -> tr(X^{-1}),  E -> 1/lambda_min(X),
///   Ratio(l',l) -> (E_{l'}(X)/E_l(X))^{1/(l-l')}.
/// E returns +infinity on a singular X; D/A/Ratio-with-l=d raise
/// SingularMatrix instead.
double fractional_objective(const SymMatrix& X, ObjectiveKind kind);

/// Solves the convex relaxation for the given objective.
///
/// Certificates, checked per iteration:
///   D: max_i v_i^T X^{-1} v_i  <= (d/k)(1+tol)
///   A: max_i v_i^T X^{-2} v_i  <= (tr(X^{-1})/k)(1+tol)
///   E: cutting-plane duality gap  <= tol * lambda_min(X)
///   Ratio: Frank-Wolfe gap  <= tol * objective
/// When max_iters is exhausted first, the best feasible iterate is returned
/// with certified == false.
///
/// `objective_trace`, when given, records the maximization-form objective of
/// each iterate (used by tests to check monotone improvement).
FractionalSolution solve_relaxation(const Instance& inst, ObjectiveKind kind,
                                    double tol = 1e-6, int max_iters = 200000,
                                    std::vector<double>* objective_trace = nullptr);

/// Wraps an externally supplied weight vector: checks nonnegativity, rescales
/// to sum exactly k, and computes X and the objective.
FractionalSolution validate_fractional(const Instance& inst,
                                       std::span<const double> x,
                                       ObjectiveKind kind);

}  // namespace interdesign
