#pragma once

// The rate function I_δ of the empirical measure, its δ = 1 case, and the
// critical exponent α_c in variational and boundary form.

#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "orrw/dv.hpp"
#include "orrw/entropy_flow.hpp"
#include "orrw/graph.hpp"
#include "orrw/kernels.hpp"
#include "orrw/parallel.hpp"

namespace orrw {

/// Default cap on |E| for the rate function (the number of growth sequences
/// grows factorially).
inline constexpr int kDefaultRateEdgeCap = 10;

struct Decomposition {
  GrowthSequence sequence;
  std::vector<double> weight;          // r_k
  std::vector<Measure> stage_measure;  // ν_k (zero for inactive stages)
  std::vector<Eigen::MatrixXd> flow;   // f_k(x, y)
  std::vector<bool> active;            // r_k >= 1e-10
};

struct RateValue {
  ExtendedReal value = ExtendedReal::infinity();
  std::optional<Decomposition> decomposition;
  std::vector<GrowthSequence> sequences;
  std::vector<ExtendedReal> per_sequence;
};

struct RateOptions {
  int max_edges = kDefaultRateEdgeCap;
  int threads = 0;  // 0: worker_count()
};

/// Joint program over stage flows f_1..f_b for one growth sequence: each f_k
/// is a circulation along E_k, and the stage masses add up to ν.
struct StageProgram {
  FlowProgram program;
  std::vector<int> stage, from, to;
};

inline StageProgram rate_program(const FiniteGraph& g, double delta, const Measure& nu, const GrowthSequence& seq) {
  StageProgram sp;
  const int n = g.num_vertices();
  const int b = static_cast<int>(seq.stages.size());
  for (int k = 0; k < b; ++k) {
    const Kernel p = base_kernel(g, seq.stages[k], delta);
    const DirectedPairs d = charged_pairs(g, seq.stages[k], nu);
    for (std::size_t i = 0; i < d.from.size(); ++i) {
      sp.stage.push_back(k);
      sp.from.push_back(d.from[i]);
      sp.to.push_back(d.to[i]);
      sp.program.group.push_back(k * n + d.from[i]);
      sp.program.log_ref.push_back(std::log(p(d.from[i], d.to[i])));
    }
  }
  const int nvar = static_cast<int>(sp.stage.size());
  std::vector<Eigen::VectorXd> rows;
  std::vector<double> rhs;
  for (int x = 0; x < n; ++x) {
    if (nu(x) <= kSupportEps) continue;
    for (int k = 0; k < b; ++k) {
      Eigen::VectorXd r = Eigen::VectorXd::Zero(nvar);
      bool any = false;
      for (int i = 0; i < nvar; ++i) {
        if (sp.stage[i] != k) continue;
        if (sp.from[i] == x) r(i) += 1.0, any = true;
        if (sp.to[i] == x) r(i) -= 1.0, any = true;
      }
      if (any) {
        rows.push_back(r);
        rhs.push_back(0.0);
      }
    }
    Eigen::VectorXd r = Eigen::VectorXd::Zero(nvar);
    for (int i = 0; i < nvar; ++i)
      if (sp.from[i] == x) r(i) = 1.0;
    rows.push_back(r);
    rhs.push_back(nu(x));
  }
  sp.program.A.resize(static_cast<Eigen::Index>(rows.size()), nvar);
  sp.program.b.resize(static_cast<Eigen::Index>(rows.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    sp.program.A.row(i) = rows[i].transpose();
    sp.program.b(i) = rhs[i];
  }
  return sp;
}

inline Decomposition decomposition_from(const FiniteGraph& g, const GrowthSequence& seq, const StageProgram& sp,
                                        const Eigen::VectorXd& f) {
  const int n = g.num_vertices();
  const int b = static_cast<int>(seq.stages.size());
  Decomposition d;
  d.sequence = seq;
  d.flow.assign(b, Eigen::MatrixXd::Zero(n, n));
  for (int i = 0; i < static_cast<int>(sp.stage.size()); ++i) d.flow[sp.stage[i]](sp.from[i], sp.to[i]) = f(i);
  for (int k = 0; k < b; ++k) {
    const Measure m = d.flow[k].rowwise().sum();
    const double r = m.sum();
    d.weight.push_back(r);
    d.active.push_back(r >= 1e-10);
    d.stage_measure.push_back(r > 0.0 ? Measure(m / r) : Measure(Measure::Zero(n)));
  }
  return d;
}

/// I_δ(ν): minimum over growth sequences of the best split of ν into stage
/// measures, each paying its entropy cost against the stage kernel.
inline RateValue rate_I(const FiniteGraph& g, double delta, const Measure& nu, const RateOptions& opt = {}) {
  require_positive_delta(delta);
  require_probability(g, nu);
  if (g.num_edges() > opt.max_edges)
    throw GraphError("rate function is limited to " + std::to_string(opt.max_edges) + " edges");
  RateValue out;
  out.sequences = enumerate_growth_sequences(g);
  out.per_sequence.assign(out.sequences.size(), ExtendedReal::infinity());
  // Every sequence ends with the full edge set, so all sequences are feasible
  // exactly when ν is invariant for some kernel on G.
  if (!has_stationary_kernel(g, nu)) return out;

  std::vector<Eigen::VectorXd> flows(out.sequences.size());
  std::vector<StageProgram> programs(out.sequences.size());
  parallel_for(out.sequences.size(), opt.threads > 0 ? opt.threads : worker_count(), [&](std::size_t s) {
    programs[s] = rate_program(g, delta, nu, out.sequences[s]);
    const FlowSolution sol = solve_entropy_flow(programs[s].program);
    out.per_sequence[s] = sol.value;
    flows[s] = sol.f;
  });
  ExtendedReal best = ExtendedReal::infinity();
  for (const auto& v : out.per_sequence)
    if (v < best) best = v;
  if (best.is_infinite()) return out;
  // Lexicographically first sequence within 1e-12 of the minimum.
  for (std::size_t s = 0; s < out.sequences.size(); ++s) {
    if (out.per_sequence[s].is_finite() && out.per_sequence[s].value() <= best.value() + 1e-12) {
      out.value = out.per_sequence[s];
      out.decomposition = decomposition_from(g, out.sequences[s], programs[s], flows[s]);
      break;
    }
  }
  return out;
}

/// I_1(ν): the Donsker–Varadhan rate of the simple random walk.
inline ExtendedReal rate_I1(const FiniteGraph& g, const Measure& nu) {
  return dv_functional(g, g.all_edges(), nu, 1.0).value;
}

struct AlphaResult {
  double alpha = 0.0;
  EdgeSubset argmin;
  bool unstoppable = false;
  std::vector<double> per_member;  // aligned with family.members()
};

/// inf over probability ν on V(E0) of J_{E0}(ν): a circulation along E0 with
/// total mass 1.
inline double subgraph_exit_rate(const FiniteGraph& g, double delta, EdgeSubset e0) {
  const Kernel p = base_kernel(g, e0, delta);
  FlowProgram prog;
  std::vector<int> from, to;
  for (int e : e0.edges()) {
    const auto [a, b] = g.endpoints(e);
    from.insert(from.end(), {a, b});
    to.insert(to.end(), {b, a});
  }
  const int nvar = static_cast<int>(from.size());
  for (int i = 0; i < nvar; ++i) {
    prog.group.push_back(from[i]);
    prog.log_ref.push_back(std::log(p(from[i], to[i])));
  }
  const auto verts = g.vertices_of(e0);
  std::vector<Eigen::VectorXd> rows;
  for (int x = 0; x < g.num_vertices(); ++x) {
    if (!verts[x]) continue;
    Eigen::VectorXd r = Eigen::VectorXd::Zero(nvar);
    for (int i = 0; i < nvar; ++i) {
      if (from[i] == x) r(i) += 1.0;
      if (to[i] == x) r(i) -= 1.0;
    }
    rows.push_back(r);
  }
  rows.push_back(Eigen::VectorXd::Ones(nvar));
  prog.A.resize(static_cast<Eigen::Index>(rows.size()), nvar);
  for (std::size_t i = 0; i < rows.size(); ++i) prog.A.row(i) = rows[i].transpose();
  prog.b = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(rows.size()));
  prog.b(prog.b.size() - 1) = 1.0;
  return solve_entropy_flow(prog).value.value();
}

/// α_c(δ) = min over E0 in the family of the subgraph exit rate.
inline AlphaResult alpha_c(const FiniteGraph& g, double delta, const DecreasingFamily& family) {
  require_positive_delta(delta);
  AlphaResult r;
  if (family.unstoppable()) {
    r.unstoppable = true;
    r.argmin = g.all_edges();
    r.per_member.assign(family.size(), 0.0);
    return r;
  }
  r.alpha = std::numeric_limits<double>::infinity();
  for (EdgeSubset e0 : family.members()) {
    const double v = subgraph_exit_rate(g, delta, e0);
    r.per_member.push_back(v);
    if (v < r.alpha) {
      r.alpha = v;
      r.argmin = e0;
    }
  }
  return r;
}

/// Log-ratio paid per visit to arc z for the walk on E0 relative to the simple
/// random walk: log((d − k + kδ) / (d δ)) with d the degree of head(z) and k
/// its number of E0 edges. Zero unless z is on the lifted boundary.
inline double boundary_log_ratio(const LiftedGraph& lg, EdgeSubset e0, double delta, int z) {
  const FiniteGraph& g = lg.graph();
  const int h = lg.head(z);
  const double d = g.degree(h);
  const double k = g.degree_in(h, e0);
  if (k == d) return 0.0;
  return std::log((d - k + k * delta) / (d * delta));
}

struct BoundaryFormTerms {
  double total = 0.0;
  double srw_part = 0.0;       // Λ_1(μ)
  double boundary_part = 0.0;  // Σ_z μ(z) log(...)
  Measure arc_measure;         // μ
};

namespace detail {

/// Lifted program over links z -> z' inside E0 × {±1}, reference the lifted
/// simple random walk, cost `beta` per unit of mass leaving each arc. With
/// `mu`, the arc marginal is fixed; otherwise only total mass 1 is imposed.
inline BoundaryFormTerms solve_lifted(const LiftedGraph& lg, EdgeSubset e0, const Eigen::VectorXd& beta,
                                      const std::optional<Measure>& mu) {
  const FiniteGraph& g = lg.graph();
  FlowProgram prog;
  std::vector<int> src, dst;
  for (int z = 0; z < lg.num_arcs(); ++z) {
    if (!e0.contains(lg.arc(z).edge)) continue;
    if (mu && (*mu)(z) <= kSupportEps) continue;
    for (int w : lg.out_neighbors(z)) {
      if (!e0.contains(lg.arc(w).edge)) continue;
      if (mu && (*mu)(w) <= kSupportEps) continue;
      src.push_back(z);
      dst.push_back(w);
      prog.group.push_back(z);
      prog.log_ref.push_back(-std::log(static_cast<double>(g.degree(lg.head(z)))));
    }
  }
  const int nvar = static_cast<int>(src.size());
  BoundaryFormTerms out;
  out.arc_measure = Measure::Zero(lg.num_arcs());
  if (nvar == 0) {
    out.total = std::numeric_limits<double>::infinity();
    return out;
  }
  prog.linear_cost.resize(nvar);
  for (int i = 0; i < nvar; ++i) prog.linear_cost(i) = beta(src[i]);
  std::vector<Eigen::VectorXd> rows;
  std::vector<double> rhs;
  for (int z = 0; z < lg.num_arcs(); ++z) {
    Eigen::VectorXd out_row = Eigen::VectorXd::Zero(nvar), in_row = Eigen::VectorXd::Zero(nvar);
    bool any = false;
    for (int i = 0; i < nvar; ++i) {
      if (src[i] == z) out_row(i) = 1.0, any = true;
      if (dst[i] == z) in_row(i) = 1.0, any = true;
    }
    if (!any) continue;
    if (mu) {
      rows.push_back(out_row);
      rhs.push_back((*mu)(z));
      rows.push_back(in_row);
      rhs.push_back((*mu)(z));
    } else {
      rows.push_back(out_row - in_row);
      rhs.push_back(0.0);
    }
  }
  if (!mu) {
    rows.push_back(Eigen::VectorXd::Ones(nvar));
    rhs.push_back(1.0);
  }
  prog.A.resize(static_cast<Eigen::Index>(rows.size()), nvar);
  prog.b.resize(static_cast<Eigen::Index>(rows.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    prog.A.row(i) = rows[i].transpose();
    prog.b(i) = rhs[i];
  }
  const FlowSolution sol = solve_entropy_flow(prog);
  if (!sol.feasible) {
    out.total = std::numeric_limits<double>::infinity();
    return out;
  }
  for (int i = 0; i < nvar; ++i) out.arc_measure(src[i]) += sol.f(i);
  FlowProgram srw = prog;
  srw.linear_cost.resize(0);
  out.srw_part = flow_objective(srw, sol.f);
  for (int z = 0; z < lg.num_arcs(); ++z) out.boundary_part += out.arc_measure(z) * beta(z);
  out.total = out.srw_part + out.boundary_part;
  return out;
}

inline Eigen::VectorXd boundary_costs(const LiftedGraph& lg, EdgeSubset e0, double delta) {
  Eigen::VectorXd beta = Eigen::VectorXd::Zero(lg.num_arcs());
  for (int z : lifted_boundary(lg, e0)) beta(z) = boundary_log_ratio(lg, e0, delta, z);
  return beta;
}

}  // namespace detail

/// Λ_1(μ) + Σ_{z ∈ ∂(E0 × {±1})} μ(z) log((d − k + kδ)/(dδ)) at a given arc
/// measure μ on E0 × {±1}; +inf if μ is not invariant for a walk on E0 arcs.
inline BoundaryFormTerms boundary_form_value(const FiniteGraph& g, double delta, EdgeSubset e0, const Measure& mu) {
  require_positive_delta(delta);
  const LiftedGraph lg(g);
  if (mu.size() != lg.num_arcs()) throw std::invalid_argument("arc measure has the wrong size");
  for (int z = 0; z < lg.num_arcs(); ++z)
    if (mu(z) > kSupportEps && !e0.contains(lg.arc(z).edge))
      throw std::invalid_argument("arc measure charges an arc outside the subgraph");
  return detail::solve_lifted(lg, e0, detail::boundary_costs(lg, e0, delta), mu);
}

/// α_c through the lifted walk: min over E0 and μ of the simple-random-walk
/// rate plus the boundary correction.
inline AlphaResult alpha_c_boundary_form(const FiniteGraph& g, double delta, const DecreasingFamily& family) {
  require_positive_delta(delta);
  AlphaResult r;
  if (family.unstoppable()) {
    r.unstoppable = true;
    r.argmin = g.all_edges();
    r.per_member.assign(family.size(), 0.0);
    return r;
  }
  const LiftedGraph lg(g);
  r.alpha = std::numeric_limits<double>::infinity();
  for (EdgeSubset e0 : family.members()) {
    const double v = detail::solve_lifted(lg, e0, detail::boundary_costs(lg, e0, delta), std::nullopt).total;
    r.per_member.push_back(v);
    if (v < r.alpha) {
      r.alpha = v;
      r.argmin = e0;
    }
  }
  return r;
}

/// n points from lo to hi, evenly spaced in log δ.
inline std::vector<double> log_spaced_grid(double lo, double hi, int n) {
  if (!(lo > 0.0) || !(hi >= lo) || n < 1) throw std::invalid_argument("log-spaced grid needs 0 < lo <= hi and n >= 1");
  if (n == 1) return {lo};
  std::vector<double> out;
  const double a = std::log(lo), b = std::log(hi);
  for (int i = 0; i < n; ++i) out.push_back(std::exp(a + (b - a) * i / (n - 1)));
  out.back() = hi;
  out.front() = lo;
  return out;
}

struct AlphaRow {
  double delta;
  double alpha;
};

inline std::vector<AlphaRow> sweep_alpha(const FiniteGraph& g, const DecreasingFamily& family,
                                         const std::vector<double>& deltas, int threads = 0) {
  if (deltas.empty()) throw std::invalid_argument("sweep_alpha: empty grid");
  std::vector<AlphaRow> rows(deltas.size());
  parallel_for(deltas.size(), threads > 0 ? threads : worker_count(),
               [&](std::size_t i) { rows[i] = {deltas[i], alpha_c(g, deltas[i], family).alpha}; });
  return rows;
}

struct RateRow {
  double param;
  ExtendedReal value;
  std::string sequence;  // attaining growth sequence, empty when infinite
};

inline std::vector<RateRow> sweep_rate(const FiniteGraph& g, double delta,
                                       const std::vector<std::pair<double, Measure>>& grid, int threads = 0) {
  if (grid.empty()) throw std::invalid_argument("sweep_rate: empty grid");
  std::vector<RateRow> rows(grid.size());
  RateOptions opt;
  opt.threads = 1;
  parallel_for(grid.size(), threads > 0 ? threads : worker_count(), [&](std::size_t i) {
    const RateValue v = rate_I(g, delta, grid[i].second, opt);
    rows[i] = {grid[i].first, v.value, v.decomposition ? sequence_name(g, v.decomposition->sequence) : std::string()};
  });
  return rows;
}

}  // namespace orrw
