#pragma once

// Small dense two-phase simplex with Bland's rule. Used only for support and
// feasibility questions on programs with at most a few hundred columns.

#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <vector>

namespace orrw::detail {

struct LpResult {
  enum class Status { Optimal, Infeasible, Unbounded };
  Status status = Status::Infeasible;
  Eigen::VectorXd x;
  double objective = 0.0;
};

class Tableau {
 public:
  Tableau(Eigen::MatrixXd t, std::vector<int> basis, double eps) : t_(std::move(t)), basis_(std::move(basis)), eps_(eps) {}

  // Minimises the objective stored in the last row over columns [0, ncols).
  // Returns false if unbounded.
  bool optimise(int ncols) {
    const int m = static_cast<int>(basis_.size());
    for (long guard = 0; guard < 1000000; ++guard) {
      int enter = -1;
      for (int j = 0; j < ncols; ++j) {
        if (t_(m, j) < -eps_) {
          enter = j;
          break;
        }
      }
      if (enter < 0) return true;
      int leave = -1;
      double best = std::numeric_limits<double>::infinity();
      for (int i = 0; i < m; ++i) {
        if (t_(i, enter) > eps_) {
          const double r = t_(i, rhs()) / t_(i, enter);
          if (r < best - eps_ || (r <= best + eps_ && leave >= 0 && basis_[i] < basis_[leave])) {
            best = r;
            leave = i;
          }
        }
      }
      if (leave < 0) return false;
      pivot(leave, enter);
    }
    return true;
  }

  void pivot(int row, int col) {
    t_.row(row) /= t_(row, col);
    for (int i = 0; i < t_.rows(); ++i) {
      if (i == row) continue;
      const double f = t_(i, col);
      if (f != 0.0) t_.row(i) -= f * t_.row(row);
    }
    basis_[row] = col;
  }

  int rhs() const { return static_cast<int>(t_.cols()) - 1; }
  Eigen::MatrixXd& table() { return t_; }
  std::vector<int>& basis() { return basis_; }

 private:
  Eigen::MatrixXd t_;
  std::vector<int> basis_;
  double eps_;
};

/// min c·x subject to A x = b, x >= 0.
inline LpResult simplex_solve(const Eigen::MatrixXd& a_in, const Eigen::VectorXd& b_in, const Eigen::VectorXd& c,
                              double eps = 1e-10) {
  const int m = static_cast<int>(a_in.rows());
  const int n = static_cast<int>(a_in.cols());
  Eigen::MatrixXd a = a_in;
  Eigen::VectorXd b = b_in;
  for (int i = 0; i < m; ++i) {
    if (b(i) < 0) {
      a.row(i) *= -1.0;
      b(i) *= -1.0;
    }
  }
  // Columns: x (n), artificials (m), rhs. Last row: phase-one objective.
  Eigen::MatrixXd t = Eigen::MatrixXd::Zero(m + 1, n + m + 1);
  t.topLeftCorner(m, n) = a;
  t.block(0, n, m, m).setIdentity();
  t.col(n + m).head(m) = b;
  std::vector<int> basis(m);
  for (int i = 0; i < m; ++i) basis[i] = n + i;
  for (int i = 0; i < m; ++i) t.row(m) -= t.row(i);
  for (int i = 0; i < m; ++i) t(m, n + i) = 0.0;

  Tableau tab(std::move(t), std::move(basis), eps);
  tab.optimise(n);
  LpResult res;
  const double scale = std::max(1.0, b.cwiseAbs().maxCoeff());
  if (-tab.table()(m, n + m) > 1e-9 * scale) return res;  // infeasible

  // Drive artificials out of the basis; rows where that is impossible are redundant.
  std::vector<bool> keep(m, true);
  for (int i = 0; i < m; ++i) {
    if (tab.basis()[i] < n) continue;
    int col = -1;
    for (int j = 0; j < n; ++j) {
      if (std::abs(tab.table()(i, j)) > 1e-9) {
        col = j;
        break;
      }
    }
    if (col >= 0) {
      tab.pivot(i, col);
    } else {
      keep[i] = false;
    }
  }
  int rows = 0;
  for (int i = 0; i < m; ++i) rows += keep[i] ? 1 : 0;
  Eigen::MatrixXd t2 = Eigen::MatrixXd::Zero(rows + 1, n + 1);
  std::vector<int> basis2;
  for (int i = 0, r = 0; i < m; ++i) {
    if (!keep[i]) continue;
    t2.row(r).head(n) = tab.table().row(i).head(n);
    t2(r, n) = tab.table()(i, n + m);
    basis2.push_back(tab.basis()[i]);
    ++r;
  }
  t2.row(rows).head(n) = c.transpose();
  for (int r = 0; r < rows; ++r) {
    const double f = t2(rows, basis2[r]);
    if (f != 0.0) t2.row(rows) -= f * t2.row(r);
  }
  Tableau tab2(std::move(t2), std::move(basis2), eps);
  if (!tab2.optimise(n)) {
    res.status = LpResult::Status::Unbounded;
    return res;
  }
  res.status = LpResult::Status::Optimal;
  res.x = Eigen::VectorXd::Zero(n);
  for (int r = 0; r < rows; ++r) res.x(tab2.basis()[r]) = std::max(0.0, tab2.table()(r, n));
  res.objective = c.dot(res.x);
  return res;
}

/// Feasible point of {A x = b, x >= 0} that is positive on every coordinate
/// that can be positive at all (a relative-interior point). Empty if the
/// system is infeasible.
struct MaxSupportResult {
  bool feasible = false;
  Eigen::VectorXd x;
  std::vector<bool> live;
};

inline MaxSupportResult max_support_point(const Eigen::MatrixXd& a, const Eigen::VectorXd& b) {
  const int m = static_cast<int>(a.rows());
  const int n = static_cast<int>(a.cols());
  MaxSupportResult out;
  if (simplex_solve(a, b, Eigen::VectorXd::Zero(n)).status != LpResult::Status::Optimal) return out;
  out.feasible = true;

  // Homogenised: A f − λ b = 0, f − s − u = 0, s + w = 1, maximise Σ s.
  // Columns: f (n), λ (1), s (n), u (n), w (n).
  const int cols = 4 * n + 1;
  Eigen::MatrixXd big = Eigen::MatrixXd::Zero(m + 2 * n, cols);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(m + 2 * n);
  big.topLeftCorner(m, n) = a;
  big.block(0, n, m, 1) = -b;
  for (int i = 0; i < n; ++i) {
    big(m + i, i) = 1.0;
    big(m + i, n + 1 + i) = -1.0;
    big(m + i, 2 * n + 1 + i) = -1.0;
    big(m + n + i, n + 1 + i) = 1.0;
    big(m + n + i, 3 * n + 1 + i) = 1.0;
    rhs(m + n + i) = 1.0;
  }
  Eigen::VectorXd cost = Eigen::VectorXd::Zero(cols);
  cost.segment(n + 1, n).setConstant(-1.0);
  const LpResult r = simplex_solve(big, rhs, cost);
  out.live.assign(n, false);
  out.x = Eigen::VectorXd::Zero(n);
  const double lambda = r.status == LpResult::Status::Optimal ? r.x(n) : 0.0;
  if (lambda <= 0.0) {
    // Only the zero vector is feasible (b = 0).
    return out;
  }
  for (int i = 0; i < n; ++i) {
    out.live[i] = r.x(n + 1 + i) > 0.5;
    out.x(i) = out.live[i] ? r.x(i) / lambda : 0.0;
  }
  return out;
}

}  // namespace orrw::detail
