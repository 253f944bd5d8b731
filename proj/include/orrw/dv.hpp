#pragma once

// Donsker–Varadhan cost of a vertex measure on a subgraph: the least entropy
// cost of a kernel along E' that keeps ν stationary. Flow form, potential
// (dual) form, the explicit tree kernel, and a stationarity check.

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "orrw/detail/lp.hpp"
#include "orrw/entropy_flow.hpp"
#include "orrw/graph.hpp"
#include "orrw/kernels.hpp"

namespace orrw {

/// Throws unless ν is a probability vector on the vertices of g.
inline void require_probability(const FiniteGraph& g, const Measure& nu) {
  if (nu.size() != g.num_vertices()) throw std::invalid_argument("measure has the wrong number of entries");
  if ((nu.array() < 0.0).any() || !nu.allFinite()) throw std::invalid_argument("measure has negative or non-finite mass");
  if (std::abs(nu.sum() - 1.0) > 1e-9) throw std::invalid_argument("measure does not sum to 1");
}

/// Stationary measure of the simple random walk: degree / 2b.
inline Measure degree_measure(const FiniteGraph& g) {
  Measure nu(g.num_vertices());
  for (int v = 0; v < g.num_vertices(); ++v) nu(v) = g.degree(v);
  return nu / (2.0 * g.num_edges());
}

/// Directed pairs (x, y), xy ∈ sub, with both endpoints charged by ν.
struct DirectedPairs {
  std::vector<int> from, to, edge;
};

inline DirectedPairs charged_pairs(const FiniteGraph& g, EdgeSubset sub, const Measure& nu) {
  DirectedPairs d;
  for (int e : sub.edges()) {
    const auto [a, b] = g.endpoints(e);
    if (nu(a) <= kSupportEps || nu(b) <= kSupportEps) continue;
    d.from.insert(d.from.end(), {a, b});
    d.to.insert(d.to.end(), {b, a});
    d.edge.insert(d.edge.end(), {e, e});
  }
  return d;
}

/// Rows "mass out of x = ν(x)" and "mass into x = ν(x)" for every charged x.
inline void add_marginal_rows(const FiniteGraph& g, const DirectedPairs& d, const Measure& nu, Eigen::MatrixXd& a,
                              Eigen::VectorXd& b) {
  const int n = static_cast<int>(d.from.size());
  std::vector<Eigen::VectorXd> rows;
  std::vector<double> rhs;
  for (int x = 0; x < g.num_vertices(); ++x) {
    if (nu(x) <= kSupportEps) continue;
    Eigen::VectorXd out = Eigen::VectorXd::Zero(n), in = Eigen::VectorXd::Zero(n);
    for (int i = 0; i < n; ++i) {
      if (d.from[i] == x) out(i) = 1.0;
      if (d.to[i] == x) in(i) = 1.0;
    }
    rows.push_back(out);
    rhs.push_back(nu(x));
    rows.push_back(in);
    rhs.push_back(nu(x));
  }
  a.resize(static_cast<Eigen::Index>(rows.size()), n);
  b.resize(static_cast<Eigen::Index>(rows.size()));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    a.row(r) = rows[r].transpose();
    b(r) = rhs[r];
  }
}

/// Whether some kernel moving along the edges of g leaves ν invariant, i.e.
/// whether a flow with both marginals equal to ν exists (a transportation
/// feasibility question, decided by linear programming).
inline bool has_stationary_kernel(const FiniteGraph& g, const Measure& nu, EdgeSubset sub) {
  const DirectedPairs d = charged_pairs(g, sub, nu);
  if (d.from.empty()) return false;
  Eigen::MatrixXd a;
  Eigen::VectorXd b;
  add_marginal_rows(g, d, nu, a, b);
  return detail::simplex_solve(a, b, Eigen::VectorXd::Zero(a.cols())).status == detail::LpResult::Status::Optimal;
}

inline bool has_stationary_kernel(const FiniteGraph& g, const Measure& nu) {
  return has_stationary_kernel(g, nu, g.all_edges());
}

struct DVResult {
  ExtendedReal value = ExtendedReal::infinity();
  Eigen::MatrixXd flow;  // f(x, y) = ν(x) q(x, y)
  Kernel kernel;         // q on charged rows, zero elsewhere
  bool converged = false;
};

/// J_{E'}(ν) = inf { Σ_x ν(x) R(q(x,·) ‖ p̂_{E'}(x,·)) : ν q = ν, q moves along E' }.
inline DVResult dv_functional(const FiniteGraph& g, EdgeSubset sub, const Measure& nu, double delta) {
  require_positive_delta(delta);
  require_probability(g, nu);
  const auto verts = g.vertices_of(sub);
  for (int x = 0; x < g.num_vertices(); ++x)
    if (nu(x) > kSupportEps && !verts[x]) throw std::invalid_argument("dv_functional: ν charges a vertex outside the subgraph");

  const int nv = g.num_vertices();
  DVResult r;
  r.flow = Eigen::MatrixXd::Zero(nv, nv);
  r.kernel = Kernel::Zero(nv, nv);
  const DirectedPairs d = charged_pairs(g, sub, nu);
  if (d.from.empty()) return r;
  const Kernel p = base_kernel(g, sub, delta);
  FlowProgram prog;
  for (std::size_t i = 0; i < d.from.size(); ++i) {
    prog.group.push_back(d.from[i]);
    prog.log_ref.push_back(std::log(p(d.from[i], d.to[i])));
  }
  add_marginal_rows(g, d, nu, prog.A, prog.b);
  const FlowSolution sol = solve_entropy_flow(prog);
  if (!sol.feasible) return r;
  r.value = sol.value;
  r.converged = sol.converged;
  for (std::size_t i = 0; i < d.from.size(); ++i) r.flow(d.from[i], d.to[i]) = sol.f(i);
  for (int x = 0; x < nv; ++x)
    if (nu(x) > kSupportEps) r.kernel.row(x) = r.flow.row(x) / r.flow.row(x).sum();
  return r;
}

struct PotentialResult {
  double value = 0.0;
  Eigen::VectorXd log_potential;  // on all vertices; zero off the support
  bool converged = false;
};

/// sup over positive u of Σ_x ν(x) log( u(x) / (P u)(x) ), where P is p̂_{E'}
/// restricted to moves along E' between charged vertices. Newton ascent on
/// log u. Does not converge when the optimal kernel has zeros on allowed
/// moves, since the optimal potential is then unbounded.
inline PotentialResult dv_via_potential(const FiniteGraph& g, EdgeSubset sub, const Measure& nu, double delta,
                                        int max_iter = 500) {
  require_positive_delta(delta);
  require_probability(g, nu);
  const Kernel full = base_kernel(g, sub, delta);
  std::vector<int> supp;
  for (int x = 0; x < g.num_vertices(); ++x)
    if (nu(x) > kSupportEps) supp.push_back(x);
  const int k = static_cast<int>(supp.size());
  Eigen::MatrixXd p = Eigen::MatrixXd::Zero(k, k);
  Eigen::VectorXd w(k);
  for (int i = 0; i < k; ++i) {
    w(i) = nu(supp[i]);
    for (int j = 0; j < k; ++j) {
      const auto e = g.edge_between(supp[i], supp[j]);
      if (e && sub.contains(*e)) p(i, j) = full(supp[i], supp[j]);
    }
  }
  PotentialResult res;
  res.log_potential = Eigen::VectorXd::Zero(g.num_vertices());
  for (int i = 0; i < k; ++i)
    if (p.row(i).sum() == 0.0) return res;  // a charged vertex with nowhere to go

  auto objective = [&](const Eigen::VectorXd& phi) {
    double v = 0.0;
    for (int i = 0; i < k; ++i) {
      const double mx = phi.maxCoeff();
      double s = 0.0;
      for (int j = 0; j < k; ++j) s += p(i, j) * std::exp(phi(j) - mx);
      v += w(i) * (phi(i) - mx - std::log(s));
    }
    return v;
  };

  // Coordinate 0 is pinned at zero (the objective is shift invariant).
  Eigen::VectorXd phi = Eigen::VectorXd::Zero(k);
  for (int it = 0; it < max_iter; ++it) {
    Eigen::VectorXd grad = w;
    Eigen::MatrixXd hess = Eigen::MatrixXd::Zero(k, k);
    const double mx = phi.maxCoeff();
    for (int i = 0; i < k; ++i) {
      Eigen::VectorXd q(k);
      for (int j = 0; j < k; ++j) q(j) = p(i, j) * std::exp(phi(j) - mx);
      q /= q.sum();
      grad -= w(i) * q;
      hess -= w(i) * (Eigen::MatrixXd(q.asDiagonal()) - q * q.transpose());
    }
    if (k == 1 || grad.tail(k - 1).cwiseAbs().maxCoeff() < 1e-13) {
      res.converged = true;
      break;
    }
    const Eigen::MatrixXd h = -hess.bottomRightCorner(k - 1, k - 1);
    Eigen::VectorXd step = Eigen::VectorXd::Zero(k);
    step.tail(k - 1) = h.ldlt().solve(grad.tail(k - 1));
    if (!step.allFinite()) break;
    const double f0 = objective(phi);
    double s = 1.0;
    while (s > 1e-12 && objective(phi + s * step) < f0 + 1e-4 * s * grad.dot(step)) s *= 0.5;
    if (s <= 1e-12) {
      res.converged = grad.cwiseAbs().maxCoeff() < 1e-9;
      break;
    }
    phi += s * step;
    if (phi.cwiseAbs().maxCoeff() > 700.0) break;  // potential escaping to infinity
  }
  res.value = objective(phi);
  for (int i = 0; i < k; ++i) res.log_potential(supp[i]) = phi(i);
  return res;
}

/// The unique stationary kernel of ν on a tree, built from the leaves inward:
/// on a tree every stationary flow is symmetric, and the flow from a vertex to
/// its parent is what the vertex does not send to its children.
inline Kernel tree_kernel(const FiniteGraph& g, const Measure& nu, double tol = 1e-12) {
  if (g.num_edges() != g.num_vertices() - 1) throw std::invalid_argument("tree_kernel: graph is not a tree");
  require_probability(g, nu);
  const int n = g.num_vertices();
  std::vector<int> supp;
  for (int x = 0; x < n; ++x)
    if (nu(x) > kSupportEps) supp.push_back(x);
  if (supp.size() < 2) throw std::domain_error("tree_kernel: ν must charge at least two vertices");
  const int root = nu(g.start()) > kSupportEps ? g.start() : supp.front();

  std::vector<int> parent(n, -2), order;
  parent[root] = -1;
  std::vector<int> stack{root};
  while (!stack.empty()) {
    const int v = stack.back();
    stack.pop_back();
    order.push_back(v);
    for (int e : g.incident_edges(v)) {
      const int w = g.other_end(e, v);
      if (parent[w] != -2 || nu(w) <= kSupportEps) continue;
      parent[w] = v;
      stack.push_back(w);
    }
  }
  if (order.size() != supp.size()) throw std::domain_error("tree_kernel: support of ν is not connected");

  std::vector<double> up(n, 0.0);       // flow v -> parent(v)
  std::vector<double> to_kids(n, 0.0);  // Σ over children c of flow c -> v (= flow v -> c)
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    const int v = *it;
    if (parent[v] < 0) continue;
    up[v] = nu(v) - to_kids[v];
    if (up[v] < -tol || up[v] > nu(v) + tol) throw std::domain_error("tree_kernel: no stationary kernel for ν");
    up[v] = std::max(up[v], 0.0);
    to_kids[parent[v]] += up[v];
  }
  if (std::abs(to_kids[root] - nu(root)) > 1e-9) throw std::domain_error("tree_kernel: no stationary kernel for ν");

  Kernel q = Kernel::Zero(n, n);
  for (int v : order) {
    if (parent[v] < 0) continue;
    q(v, parent[v]) = up[v] / nu(v);
    q(parent[v], v) = up[v] / nu(parent[v]);
  }
  return q;
}

/// Stationarity check for an optimal flow: on every move carrying flow,
/// log(q/p)(x, y) must split as a(x) + b(y). Returns the largest deviation of
/// the least-squares split.
inline double kkt_check(const DVResult& r, const FiniteGraph& g, EdgeSubset sub, double delta) {
  if (r.value.is_infinite()) throw std::invalid_argument("kkt_check: infinite value");
  const int n = g.num_vertices();
  const Kernel p = base_kernel(g, sub, delta);
  const double fmax = r.flow.maxCoeff();
  std::vector<std::pair<int, int>> moves;
  std::vector<double> val;
  for (int x = 0; x < n; ++x) {
    const double m = r.flow.row(x).sum();
    for (int y = 0; y < n; ++y) {
      if (r.flow(x, y) <= 1e-9 * fmax) continue;
      moves.push_back({x, y});
      val.push_back(std::log(r.flow(x, y) / m / p(x, y)));
    }
  }
  if (moves.empty()) return 0.0;
  Eigen::MatrixXd design = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(moves.size()), 2 * n);
  Eigen::VectorXd rhs(static_cast<Eigen::Index>(moves.size()));
  for (std::size_t i = 0; i < moves.size(); ++i) {
    design(i, moves[i].first) = 1.0;
    design(i, n + moves[i].second) = 1.0;
    rhs(i) = val[i];
  }
  const Eigen::VectorXd coef = design.completeOrthogonalDecomposition().solve(rhs);
  return (design * coef - rhs).cwiseAbs().maxCoeff();
}

}  // namespace orrw
