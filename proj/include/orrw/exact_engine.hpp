#pragma once

// Exact law of the stopping time "traversed set leaves the family" via the
// Markov chain on (oriented edge, traversed set), and Perron exit rates.

#include <boost/multiprecision/cpp_int.hpp>
#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "orrw/graph.hpp"
#include "orrw/kernels.hpp"
#include "orrw/perron.hpp"

namespace orrw {

using Rational = boost::multiprecision::cpp_rational;

inline constexpr int kMaxMetaChainEdges = 16;
inline constexpr long kMaxSurvivalSteps = 100000;

/// Reachable states (arc, traversed set) of the lifted walk while the
/// traversed set stays in the family. Leaving the family moves mass to a
/// single absorbing sink, encoded as target -1.
template <class Scalar>
struct MetaChainT {
  struct Move {
    int to = -1;
    Scalar prob{};
  };

  std::vector<int> arc;
  std::vector<EdgeSubset> traversed;
  std::vector<std::vector<Move>> moves;
  /// Live states after the first step with their probabilities.
  std::vector<std::pair<int, Scalar>> initial;
  /// Probability of stopping at the very first step.
  Scalar initial_stopped{};
  bool sink_reachable = false;

  int num_states() const { return static_cast<int>(arc.size()); }
};

using MetaChain = MetaChainT<double>;

template <class Scalar>
MetaChainT<Scalar> build_meta_chain_t(const FiniteGraph& g, const Scalar& delta, const DecreasingFamily& family) {
  if (g.num_edges() > kMaxMetaChainEdges)
    throw GraphError("exact engine is limited to " + std::to_string(kMaxMetaChainEdges) + " edges");
  if (!(delta > Scalar(0))) throw std::invalid_argument("delta must be positive");
  const LiftedGraph lg(g);
  MetaChainT<Scalar> chain;
  std::map<std::pair<int, EdgeSubset::Mask>, int> index;
  std::vector<int> queue;
  auto state_of = [&](int z, EdgeSubset f) {
    auto [it, fresh] = index.try_emplace({z, f.mask()}, chain.num_states());
    if (fresh) {
      chain.arc.push_back(z);
      chain.traversed.push_back(f);
      chain.moves.emplace_back();
      queue.push_back(it->second);
    }
    return it->second;
  };

  // The first step is uniform over the start vertex's edges, i.e. p̂ with
  // nothing traversed yet.
  const int v1 = g.start();
  for (int e : g.incident_edges(v1)) {
    const Scalar p = step_probability(g, EdgeSubset(), delta, v1, e);
    const EdgeSubset f = EdgeSubset::single(e);
    if (family.contains(f)) {
      chain.initial.emplace_back(state_of(lg.arc_leaving(e, v1), f), p);
    } else {
      chain.initial_stopped += p;
      chain.sink_reachable = true;
    }
  }
  for (std::size_t qi = 0; qi < queue.size(); ++qi) {
    const int s = queue[qi];
    const int z = chain.arc[s];
    const EdgeSubset f = chain.traversed[s];
    const int h = lg.head(z);
    std::vector<typename MetaChainT<Scalar>::Move> out;
    for (int e : g.incident_edges(h)) {
      const Scalar p = step_probability(g, f, delta, h, e);
      const EdgeSubset next = f.with(e);
      if (family.contains(next)) {
        out.push_back({state_of(lg.arc_leaving(e, h), next), p});
      } else {
        out.push_back({-1, p});
        chain.sink_reachable = true;
      }
    }
    chain.moves[s] = std::move(out);
  }
  return chain;
}

inline MetaChain build_meta_chain(const FiniteGraph& g, double delta, const DecreasingFamily& family) {
  require_positive_delta(delta);
  return build_meta_chain_t<double>(g, delta, family);
}

/// P(T > n) for n = 0..n_max. Kept in log form as well, since the survival
/// probability underflows long before the horizon cap on fast-decaying graphs.
struct SurvivalCurve {
  std::vector<double> survival;
  std::vector<double> log_survival;

  long n_max() const { return static_cast<long>(survival.size()) - 1; }
};

inline SurvivalCurve survival_curve(const MetaChain& chain, long n_max) {
  if (n_max < 0 || n_max > kMaxSurvivalSteps) throw std::invalid_argument("survival_curve: n_max must be in [0, 1e5]");
  SurvivalCurve c;
  c.survival.assign(n_max + 1, 0.0);
  c.log_survival.assign(n_max + 1, -std::numeric_limits<double>::infinity());
  c.survival[0] = 1.0;
  c.log_survival[0] = 0.0;
  std::vector<double> v(chain.num_states(), 0.0), next(chain.num_states());
  for (const auto& [s, p] : chain.initial) v[s] += p;
  double log_scale = 0.0;
  for (long n = 1; n <= n_max; ++n) {
    if (n > 1) {
      std::fill(next.begin(), next.end(), 0.0);
      for (int s = 0; s < chain.num_states(); ++s) {
        if (v[s] == 0.0) continue;
        for (const auto& m : chain.moves[s])
          if (m.to >= 0) next[m.to] += v[s] * m.prob;
      }
      v.swap(next);
    }
    double mass = 0.0;
    for (double x : v) mass += x;
    if (mass <= 0.0) break;
    log_scale += std::log(mass);
    c.log_survival[n] = log_scale;
    c.survival[n] = std::exp(log_scale);
    for (double& x : v) x /= mass;
  }
  return c;
}

/// Exact rational survival probabilities; small graphs and short horizons only.
inline std::vector<Rational> survival_curve_exact(const FiniteGraph& g, const Rational& delta,
                                                  const DecreasingFamily& family, long n_max) {
  if (g.num_edges() > 3 || n_max > 20) throw std::invalid_argument("exact rational mode needs b <= 3 and n <= 20");
  const auto chain = build_meta_chain_t<Rational>(g, delta, family);
  std::vector<Rational> out(n_max + 1);
  out[0] = 1;
  std::vector<Rational> v(chain.num_states()), next(chain.num_states());
  for (const auto& [s, p] : chain.initial) v[s] += p;
  for (long n = 1; n <= n_max; ++n) {
    if (n > 1) {
      for (auto& x : next) x = 0;
      for (int s = 0; s < chain.num_states(); ++s) {
        if (v[s] == 0) continue;
        for (const auto& m : chain.moves[s])
          if (m.to >= 0) next[m.to] += v[s] * m.prob;
      }
      v.swap(next);
    }
    Rational mass = 0;
    for (const auto& x : v) mass += x;
    out[n] = mass;
  }
  return out;
}

/// −log ρ of p̂_{E0} restricted to moves along E0 (vertex space).
inline double perron_decay(const FiniteGraph& g, double delta, EdgeSubset e0) {
  if (!in_S(g, e0)) throw GraphError("perron_decay: subset is not an anchored connected subset");
  const double rho = spectral_radius(restricted_base_kernel(g, e0, delta), std::vector<int>{g.start()});
  return -std::log(rho);
}

/// Same rate computed on oriented edges over E0, from the arcs leaving the start.
inline double perron_decay_lifted(const LiftedGraph& lg, double delta, EdgeSubset e0) {
  const FiniteGraph& g = lg.graph();
  if (!in_S(g, e0)) throw GraphError("perron_decay: subset is not an anchored connected subset");
  std::vector<int> sources;
  for (int e : g.incident_edges(g.start()))
    if (e0.contains(e)) sources.push_back(lg.arc_leaving(e, g.start()));
  const double rho = spectral_radius(restricted_lifted_kernel(lg, e0, delta), sources);
  return -std::log(rho);
}

struct AlphaOracleResult {
  double alpha = 0.0;
  EdgeSubset argmin;
  bool unstoppable = false;
};

/// min over E0 in the family of the Perron exit rate. Also checks that vertex
/// and arc spaces agree.
inline AlphaOracleResult exact_alpha_oracle(const FiniteGraph& g, double delta, const DecreasingFamily& family) {
  require_positive_delta(delta);
  AlphaOracleResult r;
  if (family.unstoppable()) {
    r.unstoppable = true;
    r.argmin = g.all_edges();
    return r;
  }
  const LiftedGraph lg(g);
  double best = std::numeric_limits<double>::infinity();
  for (EdgeSubset e0 : family.members()) {
    const double a = perron_decay(g, delta, e0);
    const double b = perron_decay_lifted(lg, delta, e0);
    if (std::abs(a - b) > 1e-9)
      throw std::logic_error("vertex and arc Perron rates disagree on " + g.subset_name(e0));
    if (a < best) {
      best = a;
      r.argmin = e0;
    }
  }
  r.alpha = best;
  return r;
}

struct MomentDiagnostic {
  bool converges = false;
  /// Per-step log growth rate of e^{αn} P(T > n) over the tail of the curve.
  double log_ratio = 0.0;
  /// Partial sums of e^{αn} P(T > n), n = 0..n_max.
  std::vector<double> partial_sums;
};

/// Ratio test on e^{αn} P(T > n). Terms are summed in consecutive pairs before
/// taking ratios, which removes the period-2 oscillation of walks on
/// bipartite pieces.
inline MomentDiagnostic exp_moment_diagnostic(const SurvivalCurve& curve, double alpha) {
  if (alpha < 0.0) throw std::invalid_argument("exp_moment_diagnostic: alpha must be non-negative");
  if (curve.log_survival.size() < 20) throw std::invalid_argument("exp_moment_diagnostic: need at least 20 curve points");
  MomentDiagnostic d;
  const long n_max = curve.n_max();
  double acc = 0.0;
  for (long n = 0; n <= n_max; ++n) {
    acc += std::exp(alpha * n + curve.log_survival[n]);
    d.partial_sums.push_back(acc);
  }
  auto log_pair = [&](long m) {
    const double a = alpha * (2 * m) + curve.log_survival[2 * m];
    const double b = alpha * (2 * m + 1) + curve.log_survival[2 * m + 1];
    const double hi = std::max(a, b);
    if (!std::isfinite(hi)) return hi;
    return hi + std::log(std::exp(a - hi) + std::exp(b - hi));
  };
  const long m_last = (n_max - 1) / 2;
  const long m_mid = m_last / 2;
  const double u_last = log_pair(m_last);
  const double u_mid = log_pair(m_mid);
  if (!std::isfinite(u_last)) {
    d.log_ratio = -std::numeric_limits<double>::infinity();
  } else {
    d.log_ratio = (u_last - u_mid) / (2.0 * (m_last - m_mid));
  }
  d.converges = d.log_ratio < -1e-5;
  return d;
}

/// Smallest N such that a[n] < b[n] for every computed n > N, if the last
/// computed point satisfies it.
inline std::optional<long> crossing_index(const std::vector<double>& log_a, const std::vector<double>& log_b) {
  const long n = static_cast<long>(std::min(log_a.size(), log_b.size()));
  if (n == 0 || !(log_a[n - 1] < log_b[n - 1])) return std::nullopt;
  long k = n - 1;
  while (k >= 0 && log_a[k] < log_b[k]) --k;
  return k;
}

}  // namespace orrw
