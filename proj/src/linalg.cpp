#include "interdesign/linalg.hpp"

#include <cmath>

namespace interdesign {

SymMatrix::SymMatrix(Eigen::MatrixXd m) : m_(std::move(m)) {
  if (m_.rows() < 1 || m_.rows() != m_.cols()) {
    throw InvalidInstance("SymMatrix: square matrix of dim >= 1 required");
  }
  m_ = ((m_ + m_.transpose()) / 2.0).eval();
}

SymMatrix SymMatrix::zero(int dim) {
  return SymMatrix(Eigen::MatrixXd::Zero(dim, dim));
}

SymMatrix SymMatrix::identity(int dim) {
  return SymMatrix(Eigen::MatrixXd::Identity(dim, dim));
}

void SymMatrix::rank_one_update(const Eigen::VectorXd& v, double w) {
  if (v.size() != m_.rows()) {
    throw InvalidInstance("rank_one_update: dimension mismatch");
  }
  m_.noalias() += w * v * v.transpose();
}

SymMatrix gram(std::span<const double> weights, const Eigen::MatrixXd& vectors) {
  const int m = static_cast<int>(vectors.rows());
  const int d = static_cast<int>(vectors.cols());
  if (static_cast<int>(weights.size()) != m || d < 1 || m < 1) {
    throw InvalidInstance("gram: dimension mismatch");
  }
  Eigen::MatrixXd X = Eigen::MatrixXd::Zero(d, d);
  for (int i = 0; i < m; ++i) {
    if (weights[i] < 0.0) throw InvalidInstance("gram: negative weight");
    if (weights[i] == 0.0) continue;
    X.noalias() += weights[i] * vectors.row(i).transpose() * vectors.row(i);
  }
  return SymMatrix(std::move(X));
}

Spectrum sym_eigen(const SymMatrix& M) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(M.data());
  if (solver.info() != Eigen::Success) {
    throw NumericalFailure("sym_eigen: eigensolver did not converge");
  }
  return {solver.eigenvalues(), solver.eigenvectors()};
}

RealRootedPoly char_poly(const SymMatrix& M) {
  Spectrum sp = sym_eigen(M);
  std::vector<double> roots(sp.eigenvalues.data(),
                            sp.eigenvalues.data() + sp.eigenvalues.size());
  return RealRootedPoly::from_roots(roots);
}

SymMatrix inv_sqrt(const SymMatrix& M, double rel_cutoff) {
  Spectrum sp = sym_eigen(M);
  const int d = M.dim();
  const double lam_max = sp.eigenvalues(d - 1);
  if (lam_max <= 0.0) throw RankDeficient("inv_sqrt: matrix is not PSD-positive");
  Eigen::VectorXd inv(d);
  for (int i = 0; i < d; ++i) {
    const double lam = sp.eigenvalues(i);
    if (lam <= rel_cutoff * lam_max) {
      throw RankDeficient("inv_sqrt: eigenvalue below relative cutoff");
    }
    inv(i) = 1.0 / std::sqrt(lam);
  }
  Eigen::MatrixXd R =
      sp.eigenvectors * inv.asDiagonal() * sp.eigenvectors.transpose();
  return SymMatrix(std::move(R));
}

double det(const SymMatrix& M) { return M.data().determinant(); }

double trace_inverse(const SymMatrix& M) {
  Spectrum sp = sym_eigen(M);
  const int d = M.dim();
  const double lam_max = std::abs(sp.eigenvalues(d - 1));
  const double lam_min = sp.eigenvalues(0);
  if (lam_min <= 1e-12 * std::max(lam_max, 1e-300)) {
    throw SingularMatrix("trace_inverse: matrix is numerically singular");
  }
  double acc = 0.0;
  for (int i = 0; i < d; ++i) acc += 1.0 / sp.eigenvalues(i);
  return acc;
}

std::vector<double> elementary_symmetric(std::span<const double> vals) {
  std::vector<double> e(vals.size() + 1, 0.0);
  e[0] = 1.0;
  std::size_t used = 0;
  for (double v : vals) {
    ++used;
    for (std::size_t j = used; j > 0; --j) e[j] += v * e[j - 1];
  }
  return e;
}

}  // namespace interdesign
