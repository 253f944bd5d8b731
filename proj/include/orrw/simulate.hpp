#pragma once

// Direct simulation of the once-reinforced walk, trajectories with their
// empirical measures, stopping times, and Monte Carlo survival regression.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "orrw/graph.hpp"
#include "orrw/kernels.hpp"
#include "orrw/parallel.hpp"
#include "orrw/rng.hpp"

namespace orrw {

struct WalkState {
  int vertex = 0;
  EdgeSubset traversed;
  long step = 0;
  std::vector<long> counts;  // traversals per edge
};

inline WalkState initial_state(const FiniteGraph& g) {
  WalkState s;
  s.vertex = g.start();
  s.counts.assign(g.num_edges(), 0);
  return s;
}

/// One step in place; returns the edge used.
inline int advance(const FiniteGraph& g, double delta, WalkState& s, RngStream& rng) {
  const auto& inc = g.incident_edges(s.vertex);
  double total = 0.0;
  for (int e : inc) total += s.traversed.contains(e) ? delta : 1.0;
  double u = rng.uniform01() * total;
  int chosen = inc.back();
  for (int e : inc) {
    const double w = s.traversed.contains(e) ? delta : 1.0;
    if (u < w) {
      chosen = e;
      break;
    }
    u -= w;
  }
  s.vertex = g.other_end(chosen, s.vertex);
  s.traversed = s.traversed.with(chosen);
  ++s.counts[chosen];
  ++s.step;
  return chosen;
}

inline WalkState step(const FiniteGraph& g, WalkState s, double delta, RngStream& rng) {
  require_positive_delta(delta);
  advance(g, delta, s, rng);
  return s;
}

struct Trajectory {
  std::vector<int> vertices;             // X_0 .. X_n
  std::vector<int> arcs;                 // lifted arc ids Z_0 .. Z_{n-1}
  std::vector<EdgeSubset> traversed;     // traversed[j]: edges used in the first j steps
  std::vector<long> renewal_times;       // 0, then the step at which each new edge first appears
  Measure empirical;                     // L_n over vertices
  Measure lifted_empirical;              // over arcs

  long length() const { return static_cast<long>(arcs.size()); }
};

/// Builds trajectory statistics from a vertex path. Consecutive vertices must
/// be adjacent.
inline Trajectory trajectory_from_path(const FiniteGraph& g, const std::vector<int>& path) {
  if (path.size() < 2) throw std::invalid_argument("trajectory needs at least one step");
  if (path.front() != g.start()) throw std::invalid_argument("trajectory must begin at the start vertex");
  const LiftedGraph lg(g);
  Trajectory t;
  t.vertices = path;
  t.traversed.push_back(EdgeSubset());
  t.renewal_times.push_back(0);
  t.empirical = Measure::Zero(g.num_vertices());
  t.lifted_empirical = Measure::Zero(lg.num_arcs());
  const long n = static_cast<long>(path.size()) - 1;
  for (long j = 0; j < n; ++j) {
    const auto e = g.edge_between(path[j], path[j + 1]);
    if (!e) throw std::invalid_argument("trajectory uses a non-edge");
    const int z = lg.arc_leaving(*e, path[j]);
    t.arcs.push_back(z);
    const EdgeSubset before = t.traversed.back();
    t.traversed.push_back(before.with(*e));
    if (j > 0 && !before.contains(*e)) t.renewal_times.push_back(j + 1);
    t.empirical(path[j]) += 1.0;
    t.lifted_empirical(z) += 1.0;
  }
  t.empirical /= static_cast<double>(n);
  t.lifted_empirical /= static_cast<double>(n);
  return t;
}

inline Trajectory run(const FiniteGraph& g, double delta, long steps, RngStream& rng) {
  require_positive_delta(delta);
  if (steps < 1) throw std::invalid_argument("run: steps must be at least 1");
  WalkState s = initial_state(g);
  std::vector<int> path{s.vertex};
  path.reserve(steps + 1);
  for (long j = 0; j < steps; ++j) {
    advance(g, delta, s, rng);
    path.push_back(s.vertex);
  }
  return trajectory_from_path(g, path);
}

/// First n with the traversed set outside the family, if any within the trajectory.
inline std::optional<long> stopping_time(const Trajectory& t, const DecreasingFamily& family) {
  for (std::size_t n = 1; n < t.traversed.size(); ++n)
    if (!family.contains(t.traversed[n])) return static_cast<long>(n);
  return std::nullopt;
}

inline constexpr long kMaxSimulationHorizon = 1'000'000;

struct SurvivalPoint {
  long n = 0;
  long survivors = 0;
  long samples = 0;
  double p_hat = 0.0;
  double std_error = 0.0;  // binomial
};

struct DecayEstimate {
  double slope = 0.0;
  double intercept = 0.0;
  double std_error = 0.0;
  long n_lo = 0;
  long n_hi = 0;
  long samples = 0;
  std::vector<SurvivalPoint> table;
  std::vector<std::string> warnings;
};

struct TailDecayOptions {
  std::vector<long> n_grid;
  long samples = 100000;
  std::uint64_t seed = 0;
  /// Inclusive fit window. Without one, grid points with fewer than 50
  /// survivors are left out of the fit.
  std::optional<std::pair<long, long>> window;
  int threads = 0;  // 0: worker_count()
};

/// Stopping time of one sampled walk, or horizon + 1 if it survives past the horizon.
inline long sample_stopping_time(const FiniteGraph& g, double delta, const DecreasingFamily& family, long horizon,
                                 RngStream& rng) {
  WalkState s = initial_state(g);
  while (s.step < horizon) {
    const EdgeSubset before = s.traversed;
    advance(g, delta, s, rng);
    if (s.traversed != before && !family.contains(s.traversed)) return s.step;
  }
  return horizon + 1;
}

/// Least-squares fit of log P̂(T > n) against n. The standard error propagates
/// the multinomial covariance of the nested survival events,
/// Cov(log P̂_n, log P̂_m) ≈ (1 − P_n) / (N P_n) for n ≤ m.
inline DecayEstimate estimate_tail_decay(const FiniteGraph& g, double delta, const DecreasingFamily& family,
                                         const TailDecayOptions& opt) {
  require_positive_delta(delta);
  if (opt.samples < 1000) throw std::invalid_argument("estimate_tail_decay: at least 1000 samples required");
  if (opt.n_grid.empty()) throw std::invalid_argument("estimate_tail_decay: empty n grid");
  for (std::size_t i = 0; i < opt.n_grid.size(); ++i) {
    if (opt.n_grid[i] < 0 || (i > 0 && opt.n_grid[i] <= opt.n_grid[i - 1]))
      throw std::invalid_argument("estimate_tail_decay: n grid must be non-negative and increasing");
  }
  const long horizon = opt.n_grid.back();
  if (horizon > kMaxSimulationHorizon) throw std::invalid_argument("estimate_tail_decay: horizon above 1e6 steps");

  std::vector<long> stop(opt.samples);
  parallel_for(stop.size(), opt.threads > 0 ? opt.threads : worker_count(), [&](std::size_t i) {
    RngStream rng(opt.seed, i);
    stop[i] = sample_stopping_time(g, delta, family, horizon, rng);
  });
  std::sort(stop.begin(), stop.end());

  DecayEstimate est;
  est.samples = opt.samples;
  const double N = static_cast<double>(opt.samples);
  for (long n : opt.n_grid) {
    const long alive = static_cast<long>(stop.end() - std::upper_bound(stop.begin(), stop.end(), n));
    const double p = alive / N;
    est.table.push_back({n, alive, opt.samples, p, std::sqrt(p * (1.0 - p) / N)});
  }
  if (est.table.front().survivors == 0)
    throw std::runtime_error("estimate_tail_decay: every sample stopped before the first grid point");

  std::vector<const SurvivalPoint*> fit;
  for (const auto& pt : est.table) {
    if (opt.window && (pt.n < opt.window->first || pt.n > opt.window->second)) continue;
    if (pt.survivors == 0) {
      est.warnings.push_back("n=" + std::to_string(pt.n) + ": no survivors, point dropped");
      continue;
    }
    if (!opt.window && pt.survivors < 50) continue;
    fit.push_back(&pt);
  }
  if (fit.size() < 2) throw std::runtime_error("estimate_tail_decay: fewer than two usable points in the fit window");

  const std::size_t k = fit.size();
  double nbar = 0.0, ybar = 0.0;
  for (const auto* pt : fit) {
    nbar += pt->n;
    ybar += std::log(pt->p_hat);
  }
  nbar /= k;
  ybar /= k;
  double sxx = 0.0, sxy = 0.0;
  for (const auto* pt : fit) {
    sxx += (pt->n - nbar) * (pt->n - nbar);
    sxy += (pt->n - nbar) * (std::log(pt->p_hat) - ybar);
  }
  est.slope = sxx > 0.0 ? sxy / sxx : 0.0;
  est.intercept = ybar - est.slope * nbar;
  double var = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    const double wi = (fit[i]->n - nbar) / sxx;
    for (std::size_t j = 0; j < k; ++j) {
      const double wj = (fit[j]->n - nbar) / sxx;
      const auto* early = fit[std::min(i, j)];
      var += wi * wj * (1.0 - early->p_hat) / (N * early->p_hat);
    }
  }
  est.std_error = std::sqrt(std::max(var, 0.0));
  est.n_lo = fit.front()->n;
  est.n_hi = fit.back()->n;
  return est;
}

}  // namespace orrw
