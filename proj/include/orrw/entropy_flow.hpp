#pragma once

// Minimisation of grouped relative-entropy objectives over flows:
//
//   minimise  Σ_i f_i log( f_i / (m_{g(i)} p_i) ) + Σ_i c_i f_i
//   subject to A f = b, f >= 0,   where m_g = Σ_{i in group g} f_i.
//
// Each group is the set of flow variables leaving one state, so m_g is that
// state's mass and f_i / m_g a transition probability. The objective is a sum
// of perspectives of relative entropy and hence jointly convex.

#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <vector>

#include "orrw/detail/lp.hpp"
#include "orrw/extended_real.hpp"

namespace orrw {

struct FlowProgram {
  std::vector<int> group;       // group id per variable
  std::vector<double> log_ref;  // log of the reference probability per variable
  Eigen::VectorXd linear_cost;  // optional, empty or one entry per variable
  Eigen::MatrixXd A;
  Eigen::VectorXd b;

  int num_vars() const { return static_cast<int>(group.size()); }
  int num_groups() const {
    int g = 0;
    for (int x : group) g = std::max(g, x + 1);
    return g;
  }
};

struct FlowSolution {
  ExtendedReal value = ExtendedReal::infinity();
  Eigen::VectorXd f;
  bool feasible = false;
  bool converged = false;
  int newton_steps = 0;
};

struct FlowSolverOptions {
  double gap_tol = 1e-11;   // target bound on (objective − optimum)
  double newton_tol = 1e-12;
  int max_newton = 2000;
};

inline Eigen::VectorXd group_masses(const FlowProgram& p, const Eigen::VectorXd& f) {
  Eigen::VectorXd m = Eigen::VectorXd::Zero(p.num_groups());
  for (int i = 0; i < p.num_vars(); ++i) m(p.group[i]) += f(i);
  return m;
}

/// Objective value with 0 log 0 = 0.
inline double flow_objective(const FlowProgram& p, const Eigen::VectorXd& f) {
  const Eigen::VectorXd m = group_masses(p, f);
  double v = 0.0;
  for (int i = 0; i < p.num_vars(); ++i) {
    if (f(i) > 0.0) v += f(i) * (std::log(f(i) / m(p.group[i])) - p.log_ref[i]);
    if (p.linear_cost.size() > 0) v += p.linear_cost(i) * f(i);
  }
  return v;
}

namespace detail {

/// Barrier-path solver restricted to the live coordinates `idx`, moving in the
/// null space N of the live constraint matrix from the feasible point x0.
class BarrierSolver {
 public:
  BarrierSolver(const FlowProgram& p, std::vector<int> idx, Eigen::MatrixXd null_basis)
      : p_(p), idx_(std::move(idx)), n_(std::move(null_basis)) {}

  double phi(const Eigen::VectorXd& f, double t) const {
    double v = 0.0;
    for (int k = 0; k < static_cast<int>(idx_.size()); ++k) v -= std::log(f(k));
    return t * restricted_objective(f) + v;
  }

  double restricted_objective(const Eigen::VectorXd& f) const {
    Eigen::VectorXd full = Eigen::VectorXd::Zero(p_.num_vars());
    for (int k = 0; k < static_cast<int>(idx_.size()); ++k) full(idx_[k]) = f(k);
    return flow_objective(p_, full);
  }

  /// Runs the barrier path from x (strictly positive, feasible). Returns the
  /// final point; sets steps and converged.
  Eigen::VectorXd solve(Eigen::VectorXd x, const FlowSolverOptions& opt, int& steps, bool& converged) const {
    const int nl = static_cast<int>(idx_.size());
    const int d = static_cast<int>(n_.cols());
    const int ng = p_.num_groups();
    double t = 1.0;
    converged = false;
    steps = 0;
    for (;;) {
      // Centering.
      for (;;) {
        if (steps >= opt.max_newton) return x;
        ++steps;
        Eigen::VectorXd m = Eigen::VectorXd::Zero(ng);
        for (int k = 0; k < nl; ++k) m(p_.group[idx_[k]]) += x(k);
        Eigen::VectorXd grad(nl);
        for (int k = 0; k < nl; ++k) {
          const int i = idx_[k];
          double gi = std::log(x(k) / m(p_.group[i])) - p_.log_ref[i];
          if (p_.linear_cost.size() > 0) gi += p_.linear_cost(i);
          grad(k) = t * gi - 1.0 / x(k);
        }
        // Hessian of the objective: per group diag(1/f) − 1 1ᵀ / m.
        Eigen::MatrixXd h = Eigen::MatrixXd::Zero(nl, nl);
        for (int k = 0; k < nl; ++k) h(k, k) = t / x(k) + 1.0 / (x(k) * x(k));
        for (int k = 0; k < nl; ++k)
          for (int l = 0; l < nl; ++l)
            if (p_.group[idx_[k]] == p_.group[idx_[l]]) h(k, l) -= t / m(p_.group[idx_[k]]);
        const Eigen::VectorXd g = n_.transpose() * grad;
        const Eigen::MatrixXd hr = n_.transpose() * h * n_;
        Eigen::LDLT<Eigen::MatrixXd> ldlt(hr);
        Eigen::VectorXd dz = ldlt.solve(-g);
        if (ldlt.info() != Eigen::Success || !dz.allFinite()) {
          Eigen::MatrixXd reg = hr + 1e-12 * hr.diagonal().cwiseAbs().maxCoeff() * Eigen::MatrixXd::Identity(d, d);
          dz = reg.ldlt().solve(-g);
        }
        const double decrement = -g.dot(dz);
        if (!(decrement > opt.newton_tol)) break;
        const Eigen::VectorXd dx = n_ * dz;
        double s = 1.0;
        for (int k = 0; k < nl; ++k)
          if (dx(k) < 0.0) s = std::min(s, -0.99 * x(k) / dx(k));
        // Close to the centre a damped-free Newton step is safe, and the
        // Armijo test is unreliable there: at large t the decrease is below
        // the rounding error of phi.
        if (decrement < 0.1) {
          x += s * dx;
          continue;
        }
        const double phi0 = phi(x, t);
        bool moved = false;
        while (s > 1e-14) {
          const Eigen::VectorXd xn = x + s * dx;
          if ((xn.array() > 0.0).all() && phi(xn, t) <= phi0 - 0.25 * s * decrement) {
            x = xn;
            moved = true;
            break;
          }
          s *= 0.5;
        }
        if (!moved) break;
      }
      if (nl / t < opt.gap_tol) {
        converged = true;
        return x;
      }
      t *= 10.0;
    }
  }

 private:
  const FlowProgram& p_;
  std::vector<int> idx_;
  Eigen::MatrixXd n_;
};

}  // namespace detail

/// Solves the program. Infeasible programs get value +inf. Coordinates that
/// vanish on every feasible point are found by linear programming and fixed
/// at zero; the rest are optimised along a log-barrier path.
inline FlowSolution solve_entropy_flow(const FlowProgram& p, const FlowSolverOptions& opt = {}) {
  FlowSolution sol;
  const int n = p.num_vars();
  const auto support = detail::max_support_point(p.A, p.b);
  if (!support.feasible) return sol;
  sol.feasible = true;
  sol.f = Eigen::VectorXd::Zero(n);
  std::vector<int> idx;
  for (int i = 0; i < n; ++i)
    if (support.live[i]) idx.push_back(i);
  if (idx.empty()) {
    sol.value = 0.0;
    sol.converged = true;
    return sol;
  }
  const int nl = static_cast<int>(idx.size());
  Eigen::MatrixXd al(p.A.rows(), nl);
  Eigen::VectorXd x(nl);
  for (int k = 0; k < nl; ++k) {
    al.col(k) = p.A.col(idx[k]);
    x(k) = support.x(idx[k]);
  }
  Eigen::MatrixXd null_basis;
  if (al.rows() == 0) {
    null_basis = Eigen::MatrixXd::Identity(nl, nl);
  } else {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(al, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    const double thresh = 1e-10 * std::max(1.0, sv.size() ? sv(0) : 0.0);
    int rank = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i) rank += sv(i) > thresh ? 1 : 0;
    null_basis = svd.matrixV().rightCols(nl - rank);
  }
  if (null_basis.cols() == 0) {
    for (int k = 0; k < nl; ++k) sol.f(idx[k]) = x(k);
    sol.value = flow_objective(p, sol.f);
    sol.converged = true;
    return sol;
  }
  detail::BarrierSolver solver(p, idx, null_basis);
  x = solver.solve(x, opt, sol.newton_steps, sol.converged);
  for (int k = 0; k < nl; ++k) sol.f(idx[k]) = x(k);
  sol.value = flow_objective(p, sol.f);
  return sol;
}

}  // namespace orrw
