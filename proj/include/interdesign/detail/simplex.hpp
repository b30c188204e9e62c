#pragma once

#include <limits>
#include <vector>

#include <Eigen/Dense>

namespace interdesign::detail {

/// Outcome of a linear program solve.
struct LpResult {
  enum class Status { Optimal, Unbounded, Infeasible } status;
  double value = 0.0;
  Eigen::VectorXd x;
};

/// Primal simplex with Bland's rule for
///     maximize c^T z  subject to  A z <= b,  z >= 0,
/// requiring b >= 0 so the slack basis is feasible. Dense tableau; intended
/// for the small cutting-plane master problems (tens of variables, a few
/// hundred rows).
inline LpResult simplex_max(const Eigen::MatrixXd& A, const Eigen::VectorXd& b,
                            const Eigen::VectorXd& c) {
  const int rows = static_cast<int>(A.rows());
  const int n = static_cast<int>(A.cols());
  const double eps = 1e-11;

  for (int i = 0; i < rows; ++i) {
    if (b(i) < -eps) return {LpResult::Status::Infeasible, 0.0, {}};
  }

  // Tableau: [A | I | b], objective row holds reduced costs (negated c).
  Eigen::MatrixXd tab(rows + 1, n + rows + 1);
  tab.setZero();
  tab.block(0, 0, rows, n) = A;
  tab.block(0, n, rows, rows).setIdentity();
  tab.col(n + rows).head(rows) = b.cwiseMax(0.0);
  tab.row(rows).head(n) = -c.transpose();

  std::vector<int> basis(rows);
  for (int i = 0; i < rows; ++i) basis[i] = n + i;

  const long max_pivots = 50000L + 200L * static_cast<long>(rows + n);
  for (long pivots = 0; pivots < max_pivots; ++pivots) {
    // Entering column: Bland's rule, smallest index with negative reduced cost.
    int col = -1;
    for (int j = 0; j < n + rows; ++j) {
      if (tab(rows, j) < -eps) {
        col = j;
        break;
      }
    }
    if (col < 0) {
      // Optimal.
      Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
      for (int i = 0; i < rows; ++i) {
        if (basis[i] < n) x(basis[i]) = tab(i, n + rows);
      }
      return {LpResult::Status::Optimal, tab(rows, n + rows), x};
    }
    // Leaving row: min ratio, ties to the smallest basis index (Bland).
    int row = -1;
    double best_ratio = std::numeric_limits<double>::infinity();
    for (int i = 0; i < rows; ++i) {
      if (tab(i, col) > eps) {
        double ratio = tab(i, n + rows) / tab(i, col);
        if (ratio < best_ratio - eps ||
            (ratio < best_ratio + eps && (row < 0 || basis[i] < basis[row]))) {
          best_ratio = ratio;
          row = i;
        }
      }
    }
    if (row < 0) return {LpResult::Status::Unbounded, 0.0, {}};

    tab.row(row) /= tab(row, col);
    for (int i = 0; i <= rows; ++i) {
      if (i != row && tab(i, col) != 0.0) {
        tab.row(i) -= tab(i, col) * tab.row(row);
      }
    }
    basis[row] = col;
  }
  // Pivot cap exhausted; report the current point as non-optimal via
  // Infeasible so the caller falls back conservatively.
  return {LpResult::Status::Infeasible, 0.0, {}};
}

}  // namespace interdesign::detail
