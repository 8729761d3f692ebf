#pragma once

// Dense simplex for the small feasibility problems used by the hull and
// extremality tests. Problems here have at most a few hundred columns.

#include <cmath>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

namespace gptlab::lp {

/// Minimizes c.x subject to A x = b, x >= 0, starting from a feasible basis
/// (basis[i] is the column basic in row i, and A restricted to the basis must
/// be the identity). Bland's rule; returns the optimal objective and x.
struct Solution {
  double objective = 0.0;
  std::vector<double> x;
};

class Tableau {
 public:
  Tableau(std::vector<std::vector<double>> a, std::vector<double> b, std::vector<double> c, std::vector<int> basis)
      : a_(std::move(a)), b_(std::move(b)), c_(std::move(c)), basis_(std::move(basis)) {
    rows_ = static_cast<int>(a_.size());
    cols_ = static_cast<int>(c_.size());
    if (static_cast<int>(b_.size()) != rows_ || static_cast<int>(basis_.size()) != rows_)
      throw std::invalid_argument("simplex: inconsistent problem shape");
  }

  Solution solve(int max_iterations = 100000) {
    // Reduced costs r_j = c_j - c_B^T A_j, kept in a separate row.
    std::vector<double> reduced(c_);
    double objective = 0.0;
    for (int i = 0; i < rows_; ++i) {
      const double cb = c_[basis_[i]];
      if (cb == 0.0) continue;
      for (int j = 0; j < cols_; ++j) reduced[j] -= cb * a_[i][j];
      objective += cb * b_[i];
    }
    for (int iter = 0; iter < max_iterations; ++iter) {
      int enter = -1;
      for (int j = 0; j < cols_; ++j) {
        if (reduced[j] < -kPivotEps) {
          enter = j;
          break;
        }
      }
      if (enter < 0) break;
      int leave = -1;
      double best_ratio = std::numeric_limits<double>::infinity();
      for (int i = 0; i < rows_; ++i) {
        if (a_[i][enter] > kPivotEps) {
          const double ratio = b_[i] / a_[i][enter];
          if (ratio < best_ratio - 1e-15 || (std::abs(ratio - best_ratio) <= 1e-15 && leave >= 0 && basis_[i] < basis_[leave])) {
            best_ratio = ratio;
            leave = i;
          }
        }
      }
      if (leave < 0) throw std::runtime_error("simplex: problem is unbounded");
      pivot(leave, enter, reduced, objective);
    }
    Solution out;
    out.objective = objective;
    out.x.assign(cols_, 0.0);
    for (int i = 0; i < rows_; ++i) out.x[basis_[i]] = b_[i];
    return out;
  }

 private:
  static constexpr double kPivotEps = 1e-12;

  void pivot(int row, int col, std::vector<double>& reduced, double& objective) {
    const double p = a_[row][col];
    for (int j = 0; j < cols_; ++j) a_[row][j] /= p;
    b_[row] /= p;
    for (int i = 0; i < rows_; ++i) {
      if (i == row) continue;
      const double f = a_[i][col];
      if (f == 0.0) continue;
      for (int j = 0; j < cols_; ++j) a_[i][j] -= f * a_[row][j];
      b_[i] -= f * b_[row];
      if (b_[i] < 0.0 && b_[i] > -1e-13) b_[i] = 0.0;
    }
    const double f = reduced[col];
    for (int j = 0; j < cols_; ++j) reduced[j] -= f * a_[row][j];
    objective += f * b_[row];
    basis_[row] = col;
  }

  std::vector<std::vector<double>> a_;
  std::vector<double> b_;
  std::vector<double> c_;
  std::vector<int> basis_;
  int rows_ = 0;
  int cols_ = 0;
};

struct HullFit {
  double residual = 0.0;        ///< min L1 norm of (sum_k w_k p_k - target), including the sum-to-one row
  std::vector<double> weights;  ///< convex weights attaining it
};

/// Best L1 approximation of `target` by a convex combination of `points`.
inline HullFit hull_fit(std::span<const double> target, const std::vector<std::vector<double>>& points) {
  if (points.empty()) throw std::invalid_argument("hull_fit: empty point list");
  const int dim = static_cast<int>(target.size());
  const int n = static_cast<int>(points.size());
  for (const auto& p : points)
    if (static_cast<int>(p.size()) != dim) throw std::invalid_argument("hull_fit: dimension mismatch");

  // Rows: dim coordinate rows plus the sum-to-one row.
  // Columns: n weights, then (plus, minus) residual slacks for every row.
  const int rows = dim + 1;
  const int cols = n + 2 * rows;
  std::vector<std::vector<double>> a(rows, std::vector<double>(cols, 0.0));
  std::vector<double> b(rows, 0.0);
  std::vector<double> c(cols, 0.0);
  std::vector<int> basis(rows, 0);
  for (int i = 0; i < rows; ++i) {
    double rhs = (i < dim) ? target[i] : 1.0;
    for (int k = 0; k < n; ++k) a[i][k] = (i < dim) ? points[k][i] : 1.0;
    a[i][n + 2 * i] = 1.0;
    a[i][n + 2 * i + 1] = -1.0;
    c[n + 2 * i] = 1.0;
    c[n + 2 * i + 1] = 1.0;
    if (rhs < 0.0) {
      for (int j = 0; j < cols; ++j) a[i][j] = -a[i][j];
      rhs = -rhs;
      basis[i] = n + 2 * i + 1;
    } else {
      basis[i] = n + 2 * i;
    }
    b[i] = rhs;
  }
  Tableau t(std::move(a), std::move(b), std::move(c), std::move(basis));
  const Solution s = t.solve();
  HullFit out;
  out.residual = s.objective;
  out.weights.assign(s.x.begin(), s.x.begin() + n);
  return out;
}

}  // namespace gptlab::lp
