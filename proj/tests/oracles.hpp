#pragma once

// Independent reference computations used only by the tests. None of these
// share code with the library routines they check.

#include <Eigen/Dense>
#include <algorithm>
#include <boost/multiprecision/cpp_int.hpp>
#include <cmath>
#include <functional>
#include <numeric>
#include <utility>
#include <vector>

namespace oracle {

using Rational = boost::multiprecision::cpp_rational;
using Edge = std::pair<int, int>;

/// Plain graph: vertices 0..n-1, start vertex 0.
struct Graph {
  int n = 0;
  std::vector<Edge> edges;

  std::vector<int> incident(int v) const {
    std::vector<int> out;
    for (int e = 0; e < static_cast<int>(edges.size()); ++e)
      if (edges[e].first == v || edges[e].second == v) out.push_back(e);
    return out;
  }
  int other(int e, int v) const { return edges[e].first == v ? edges[e].second : edges[e].first; }
};

/// Connected and touching vertex 0, via union-find.
inline bool anchored_connected(const Graph& g, unsigned mask) {
  if (mask == 0) return false;
  std::vector<int> parent(g.n);
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); };
  std::vector<bool> touched(g.n, false);
  for (int e = 0; e < static_cast<int>(g.edges.size()); ++e) {
    if (!((mask >> e) & 1U)) continue;
    const auto [a, b] = g.edges[e];
    touched[a] = touched[b] = true;
    parent[find(a)] = find(b);
  }
  if (!touched[0]) return false;
  for (int v = 0; v < g.n; ++v)
    if (touched[v] && find(v) != find(0)) return false;
  return true;
}

inline std::vector<unsigned> all_anchored_connected(const Graph& g) {
  std::vector<unsigned> out;
  for (unsigned m = 1; m < (1U << g.edges.size()); ++m)
    if (anchored_connected(g, m)) out.push_back(m);
  return out;
}

/// Growth orders: permutations of the edges whose prefixes satisfy the four
/// growth conditions, checked literally.
inline std::vector<std::vector<int>> growth_orders(const Graph& g) {
  std::vector<int> perm(g.edges.size());
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<std::vector<int>> out;
  do {
    bool ok = g.edges[perm[0]].first == 0 || g.edges[perm[0]].second == 0;
    for (std::size_t k = 1; ok && k < perm.size(); ++k) {
      const auto [a, b] = g.edges[perm[k]];
      bool adj = false;
      for (std::size_t j = 0; j < k; ++j) {
        const auto [c, d] = g.edges[perm[j]];
        adj = adj || a == c || a == d || b == c || b == d;
      }
      ok = adj;
    }
    if (ok) out.push_back(perm);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return out;
}

/// P(all of the first n traversed sets satisfy `alive`) by listing every path.
template <class Scalar>
Scalar enumerate_survival(const Graph& g, const Scalar& delta, int n, const std::function<bool(unsigned)>& alive) {
  Scalar total(0);
  std::function<void(int, unsigned, int, Scalar)> rec = [&](int v, unsigned used, int left, Scalar p) {
    if (left == 0) {
      total += p;
      return;
    }
    const auto inc = g.incident(v);
    Scalar z(0);
    for (int e : inc) z += ((used >> e) & 1U) ? delta : Scalar(1);
    for (int e : inc) {
      const unsigned next = used | (1U << e);
      if (!alive(next)) continue;
      const Scalar w = ((used >> e) & 1U) ? delta : Scalar(1);
      rec(g.other(e, v), next, left - 1, p * w / z);
    }
  };
  rec(0, 0U, n, Scalar(1));
  return total;
}

/// Largest eigenvalue modulus via a general eigensolver.
inline double spectral_radius(const Eigen::MatrixXd& a) {
  Eigen::EigenSolver<Eigen::MatrixXd> es(a, false);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

/// Golden-section minimisation of a unimodal function on [lo, hi].
inline double golden_min(const std::function<double(double)>& f, double lo, double hi, int iters = 200) {
  const double r = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double c = b - r * (b - a), d = a + r * (b - a);
  double fc = f(c), fd = f(d);
  for (int i = 0; i < iters; ++i) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - r * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + r * (b - a);
      fd = f(d);
    }
  }
  return std::min(fc, fd);
}

}  // namespace oracle
