#pragma once

#include <Eigen/Dense>
#include <span>
#include <vector>

#include "interdesign/errors.hpp"
#include "interdesign/poly.hpp"

namespace interdesign {

/// Dense symmetric matrix over a small dimension d. Symmetry is enforced at
/// construction by averaging M and M^T.
class SymMatrix {
 public:
  explicit SymMatrix(Eigen::MatrixXd m);
  static SymMatrix zero(int dim);
  static SymMatrix identity(int dim);

  int dim() const { return static_cast<int>(m_.rows()); }
  const Eigen::MatrixXd& data() const { return m_; }
  double trace() const { return m_.trace(); }

  /// M += w * v v^T
  void rank_one_update(const Eigen::VectorXd& v, double w = 1.0);

 private:
  Eigen::MatrixXd m_;
};

struct Spectrum {
  Eigen::VectorXd eigenvalues;   // ascending
  Eigen::MatrixXd eigenvectors;  // orthonormal columns matching eigenvalues
};

/// sum_i weights(i) * v_i v_i^T where v_i are the rows of `vectors` (m x d).
SymMatrix gram(std::span<const double> weights, const Eigen::MatrixXd& vectors);

/// Eigendecomposition of a symmetric matrix (tridiagonalization + implicit
/// shifts underneath). Deterministic for identical input.
Spectrum sym_eigen(const SymMatrix& M);

/// Monic characteristic polynomial det(x I - M) built from the spectrum.
RealRootedPoly char_poly(const SymMatrix& M);

/// M^{-1/2} for positive definite M. Eigenvalues at or below
/// rel_cutoff * lambda_max signal rank deficiency.
SymMatrix inv_sqrt(const SymMatrix& M, double rel_cutoff = 1e-10);

/// Determinant via LU factorization (sign-correct, zero allowed).
double det(const SymMatrix& M);

/// tr(M^{-1}) = sum 1/lambda_i for positive definite M.
double trace_inverse(const SymMatrix& M);

/// Elementary symmetric polynomials e_0..e_n of the given values.
std::vector<double> elementary_symmetric(std::span<const double> vals);

}  // namespace interdesign
