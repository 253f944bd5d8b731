#pragma once

// Once-reinforced transition kernels on vertices and on oriented edges, and
// relative entropy.

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>

#include "orrw/extended_real.hpp"
#include "orrw/graph.hpp"

namespace orrw {

using Kernel = Eigen::MatrixXd;
using Measure = Eigen::VectorXd;

/// Masses below this are treated as outside the support.
inline constexpr double kSupportEps = 1e-15;

inline void require_positive_delta(double delta) {
  if (!(delta > 0.0) || !std::isfinite(delta)) throw std::invalid_argument("delta must be a positive finite number");
}

/// Probability that the walk at x moves along edge e when `traversed` carries
/// weight delta and every other edge weight 1. Generic in the scalar so the
/// exact engine can run it on rationals.
template <class Scalar>
Scalar step_probability(const FiniteGraph& g, EdgeSubset traversed, const Scalar& delta, int x, int e) {
  Scalar total(0);
  for (int f : g.incident_edges(x)) total += traversed.contains(f) ? delta : Scalar(1);
  const Scalar w = traversed.contains(e) ? delta : Scalar(1);
  return w / total;
}

/// Vertex kernel p̂_{E'}: p̂(x,y) proportional to delta if xy ∈ E', 1 otherwise.
inline Kernel base_kernel(const FiniteGraph& g, EdgeSubset sub, double delta) {
  require_positive_delta(delta);
  const int n = g.num_vertices();
  Kernel p = Kernel::Zero(n, n);
  for (int x = 0; x < n; ++x)
    for (int e : g.incident_edges(x)) p(x, g.other_end(e, x)) = step_probability(g, sub, delta, x, e);
  return p;
}

/// Lifted kernel p_{E'} on arcs: p(z1,z2) = p̂_{E'}(tail z2, head z2) when head z1 = tail z2.
inline Kernel lifted_kernel(const LiftedGraph& lg, EdgeSubset sub, double delta) {
  require_positive_delta(delta);
  const FiniteGraph& g = lg.graph();
  const int m = lg.num_arcs();
  Kernel p = Kernel::Zero(m, m);
  for (int z1 = 0; z1 < m; ++z1)
    for (int z2 : lg.out_neighbors(z1)) p(z1, z2) = step_probability(g, sub, delta, lg.tail(z2), lg.arc(z2).edge);
  return p;
}

/// p̂_{E0} with every transition not along E0 removed (sub-stochastic).
inline Kernel restricted_base_kernel(const FiniteGraph& g, EdgeSubset e0, double delta) {
  Kernel p = base_kernel(g, e0, delta);
  for (int x = 0; x < g.num_vertices(); ++x)
    for (int e : g.incident_edges(x))
      if (!e0.contains(e)) p(x, g.other_end(e, x)) = 0.0;
  return p;
}

/// p_{E0} restricted to arcs over E0 in both coordinates.
inline Kernel restricted_lifted_kernel(const LiftedGraph& lg, EdgeSubset e0, double delta) {
  Kernel p = lifted_kernel(lg, e0, delta);
  for (int z = 0; z < lg.num_arcs(); ++z) {
    if (e0.contains(lg.arc(z).edge)) continue;
    p.row(z).setZero();
    p.col(z).setZero();
  }
  return p;
}

inline bool is_row_stochastic(const Kernel& k, double tol = 1e-12) {
  if ((k.array() < 0.0).any()) return false;
  return ((k.rowwise().sum().array() - 1.0).abs() <= tol).all();
}

/// R(γ‖ρ) = Σ γ log(γ/ρ) in nats, +inf when γ charges a zero of ρ.
inline ExtendedReal relative_entropy(const Eigen::Ref<const Eigen::VectorXd>& gamma,
                                     const Eigen::Ref<const Eigen::VectorXd>& rho) {
  if (gamma.size() != rho.size()) throw std::invalid_argument("relative_entropy: size mismatch");
  if ((gamma.array() < 0.0).any() || (rho.array() < 0.0).any())
    throw std::invalid_argument("relative_entropy: negative mass");
  double sum = 0.0;
  for (Eigen::Index i = 0; i < gamma.size(); ++i) {
    if (gamma(i) <= kSupportEps) continue;
    if (rho(i) == 0.0) return ExtendedReal::infinity();
    sum += xlogxy(gamma(i), rho(i));
  }
  return sum;
}

/// Σ_x ν(x) R(q(x,·) ‖ p(x,·)).
inline ExtendedReal entropy_cost(const Measure& nu, const Kernel& q, const Kernel& p) {
  if (q.rows() != p.rows() || q.cols() != p.cols() || nu.size() != q.rows())
    throw std::invalid_argument("entropy_cost: shape mismatch");
  ExtendedReal total = 0.0;
  for (Eigen::Index x = 0; x < nu.size(); ++x) {
    if (nu(x) <= kSupportEps) continue;
    total += nu(x) * relative_entropy(q.row(x).transpose(), p.row(x).transpose());
  }
  return total;
}

}  // namespace orrw
