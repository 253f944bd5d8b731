#pragma once

// Spectral radius of non-negative matrices by block-wise power iteration.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <stdexcept>
#include <vector>

namespace orrw {

class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Strongly connected components of the support graph of `a` (Tarjan).
inline std::vector<std::vector<int>> strongly_connected_components(const Eigen::MatrixXd& a) {
  const int n = static_cast<int>(a.rows());
  std::vector<int> index(n, -1), low(n, 0), stack;
  std::vector<bool> on_stack(n, false);
  std::vector<std::vector<int>> comps;
  int counter = 0;
  std::function<void(int)> visit = [&](int v) {
    index[v] = low[v] = counter++;
    stack.push_back(v);
    on_stack[v] = true;
    for (int w = 0; w < n; ++w) {
      if (a(v, w) <= 0.0) continue;
      if (index[w] < 0) {
        visit(w);
        low[v] = std::min(low[v], low[w]);
      } else if (on_stack[w]) {
        low[v] = std::min(low[v], index[w]);
      }
    }
    if (low[v] == index[v]) {
      std::vector<int> comp;
      int w;
      do {
        w = stack.back();
        stack.pop_back();
        on_stack[w] = false;
        comp.push_back(w);
      } while (w != v);
      std::sort(comp.begin(), comp.end());
      comps.push_back(std::move(comp));
    }
  };
  for (int v = 0; v < n; ++v)
    if (index[v] < 0) visit(v);
  return comps;
}

struct PowerIterationOptions {
  double tol = 1e-13;
  long max_iter = 100000;
};

/// Perron root of an irreducible non-negative matrix. Iterates the shifted
/// matrix a + s·I (primitive for s > 0) and stops when the Collatz–Wielandt
/// bounds min/max (a x)_i / x_i are within tol.
inline double irreducible_perron_root(const Eigen::MatrixXd& a, const PowerIterationOptions& opt = {}) {
  const Eigen::Index n = a.rows();
  if (n == 1) return a(0, 0);
  Eigen::VectorXd x = Eigen::VectorXd::Ones(n);
  double shift = a.rowwise().sum().maxCoeff();
  for (long it = 0; it < opt.max_iter; ++it) {
    const Eigen::VectorXd ax = a * x;
    const Eigen::ArrayXd ratio = ax.array() / x.array();
    const double lo = ratio.minCoeff();
    const double hi = ratio.maxCoeff();
    if (hi - lo <= opt.tol * std::max(1.0, hi)) return 0.5 * (lo + hi);
    // Shifting by an upper bound of the root keeps the dominance ratio away
    // from 1 when the root is small and the block is periodic.
    if (it % 64 == 63) shift = std::max(hi, 1e-300);
    x = ax + shift * x;
    x /= x.maxCoeff();
  }
  throw ConvergenceError("power iteration did not converge");
}

/// Spectral radius of a non-negative matrix: the largest Perron root over its
/// communicating classes. With `sources`, only classes reachable from them count.
inline double spectral_radius(const Eigen::MatrixXd& a, const std::optional<std::vector<int>>& sources = std::nullopt,
                              const PowerIterationOptions& opt = {}) {
  if (a.rows() != a.cols()) throw std::invalid_argument("spectral_radius: matrix must be square");
  if ((a.array() < 0.0).any()) throw std::invalid_argument("spectral_radius: negative entry");
  const int n = static_cast<int>(a.rows());
  std::vector<bool> reach(n, !sources.has_value());
  if (sources) {
    std::vector<int> stack = *sources;
    for (int s : stack) reach[s] = true;
    while (!stack.empty()) {
      const int v = stack.back();
      stack.pop_back();
      for (int w = 0; w < n; ++w) {
        if (a(v, w) > 0.0 && !reach[w]) {
          reach[w] = true;
          stack.push_back(w);
        }
      }
    }
  }
  double rho = 0.0;
  for (const auto& comp : strongly_connected_components(a)) {
    if (!reach[comp.front()]) continue;
    Eigen::MatrixXd block(comp.size(), comp.size());
    for (std::size_t i = 0; i < comp.size(); ++i)
      for (std::size_t j = 0; j < comp.size(); ++j) block(i, j) = a(comp[i], comp[j]);
    rho = std::max(rho, irreducible_perron_root(block, opt));
  }
  return rho;
}

}  // namespace orrw
