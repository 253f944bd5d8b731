#pragma once

// Self-check battery behind the `verify` command: closed forms against the
// solvers, solvers against each other, and the exact engine against direct
// enumeration and simulation.

#include <cmath>
#include <cstdio>
#include <functional>
#include <ostream>
#include <string>
#include <vector>

#include "orrw/closed_forms.hpp"
#include "orrw/exact_engine.hpp"
#include "orrw/fixtures.hpp"
#include "orrw/rates.hpp"
#include "orrw/simulate.hpp"

namespace orrw {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

class CheckLog {
 public:
  void add(std::string name, bool passed, std::string detail = {}) {
    checks_.push_back({std::move(name), passed, std::move(detail)});
  }
  bool all_passed() const {
    for (const auto& c : checks_)
      if (!c.passed) return false;
    return true;
  }
  const std::vector<CheckResult>& checks() const { return checks_; }
  void print(std::ostream& os) const {
    for (const auto& c : checks_) {
      os << (c.passed ? "PASS " : "FAIL ") << c.name;
      if (!c.detail.empty()) os << "  " << c.detail;
      os << '\n';
    }
  }

 private:
  std::vector<CheckResult> checks_;
};

inline std::string fmt_num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

/// P(T > n) by summing over every walk path of length n.
inline Rational brute_force_survival(const FiniteGraph& g, const Rational& delta, const DecreasingFamily& family,
                                     int n) {
  Rational total = 0;
  std::function<void(int, EdgeSubset, int, const Rational&)> walk = [&](int v, EdgeSubset used, int left,
                                                                       const Rational& p) {
    if (left == 0) {
      total += p;
      return;
    }
    for (int e : g.incident_edges(v)) {
      const EdgeSubset next = used.with(e);
      if (!family.contains(next)) continue;
      walk(g.other_end(e, v), next, left - 1, p * step_probability(g, used, delta, v, e));
    }
  };
  walk(g.start(), EdgeSubset(), n, Rational(1));
  return total;
}

/// Checks that hold on any graph: the three routes to α_c agree, the rate
/// vanishes at the simple-random-walk stationary measure, the exact survival
/// curve decays at rate α_c, and α_c decreases strictly in δ.
inline void verify_graph(CheckLog& log, const std::string& name, const FiniteGraph& g, const DecreasingFamily& family,
                         const std::vector<double>& deltas) {
  std::vector<double> alphas;
  for (double d : deltas) {
    const double a1 = alpha_c(g, d, family).alpha;
    const double a2 = alpha_c_boundary_form(g, d, family).alpha;
    const double a3 = exact_alpha_oracle(g, d, family).alpha;
    alphas.push_back(a1);
    log.add(name + " alpha routes agree delta=" + fmt_num(d), std::abs(a1 - a2) <= 1e-6 && std::abs(a1 - a3) <= 1e-6,
            "variational=" + fmt_num(a1) + " boundary=" + fmt_num(a2) + " spectral=" + fmt_num(a3));
    if (!family.unstoppable()) {
      const auto curve = survival_curve(build_meta_chain(g, d, family), 2000);
      const long n = curve.n_max();
      const double slope = -(curve.log_survival[n] - curve.log_survival[n - 2]) / 2.0;
      log.add(name + " survival decays at alpha_c delta=" + fmt_num(d), std::abs(slope - a3) <= 1e-3,
              "slope=" + fmt_num(slope));
    }
  }
  if (g.num_edges() <= kDefaultRateEdgeCap) {
    const RateValue r = rate_I(g, deltas.front(), degree_measure(g));
    log.add(name + " rate vanishes at degree measure", r.value.is_finite() && std::abs(r.value.value()) <= 1e-8,
            "I=" + fmt_num(r.value.value()));
  }
  if (!family.unstoppable()) {
    bool dec = true;
    for (std::size_t i = 1; i < alphas.size(); ++i)
      if (deltas[i] > deltas[i - 1] && !(alphas[i] < alphas[i - 1] - 1e-9)) dec = false;
    log.add(name + " alpha_c strictly decreasing in delta", dec);
  }
}

inline Measure three_point(double a, double b, double c) {
  Measure nu(3);
  nu << a, b, c;
  return nu;
}

/// Full battery on the built-in graphs.
inline CheckLog verify_fixtures(std::uint64_t seed = 0) {
  CheckLog log;

  // Critical exponents against closed forms.
  for (const auto& tag : fixtures::closed_form_tags()) {
    const FiniteGraph g = fixtures::by_tag(tag);
    const DecreasingFamily fam = cover_family(g);
    for (double d : {0.3, 0.5, 1.0, 2.0, 5.0, 20.0}) {
      const double c = closed::alpha_closed(tag, d);
      const double worst = std::max({std::abs(alpha_c(g, d, fam).alpha - c),
                                     std::abs(alpha_c_boundary_form(g, d, fam).alpha - c),
                                     std::abs(exact_alpha_oracle(g, d, fam).alpha - c)});
      log.add(tag + " alpha_c closed form delta=" + fmt_num(d), worst <= 1e-6, "max error " + fmt_num(worst));
    }
  }
  {
    const double a0 = alpha_c(fixtures::path4("0"), 1.0, cover_family(fixtures::path4("0"))).alpha;
    const double a1 = alpha_c(fixtures::path4("1"), 1.0, cover_family(fixtures::path4("1"))).alpha;
    log.add("path4 alpha_c independent of start", std::abs(a0 - a1) <= 1e-9);
  }

  // Rate functions against closed forms.
  for (const char* tag : {"star3", "path3"}) {
    const FiniteGraph g = fixtures::by_tag(tag);
    const bool star = std::string(tag) == "star3";
    for (double d : {0.5, 1.0, 2.0, 5.0}) {
      double worst = 0.0;
      for (int i = 0; i <= 20; ++i) {
        const double x = 0.025 * i;
        const Measure nu = star ? three_point(0.5, x, 0.5 - x) : three_point(x, 0.5, 0.5 - x);
        const double want = star ? closed::star3_rate(d, x) : closed::path3_rate(d, x);
        worst = std::max(worst, std::abs(rate_I(g, d, nu).value.value() - want));
      }
      log.add(std::string(tag) + " rate closed form delta=" + fmt_num(d), worst <= 1e-4, "max error " + fmt_num(worst));
    }
  }

  // Exact engine against enumeration.
  {
    const FiniteGraph g = fixtures::star3();
    const DecreasingFamily fam = cover_family(g);
    for (int d : {1, 2}) {
      const auto exact = survival_curve_exact(g, Rational(d), fam, 12);
      const auto fl = survival_curve(build_meta_chain(g, d, fam), 12);
      bool ok = true;
      for (int n = 0; n <= 12; ++n) {
        const Rational bf = brute_force_survival(g, Rational(d), fam, n);
        ok = ok && exact[n] == bf && std::abs(fl.survival[n] - static_cast<double>(bf)) <= 1e-12;
      }
      log.add("star3 survival equals enumeration delta=" + std::to_string(d), ok);
    }
    log.add("star3 P(C_E>5)=1/4 at delta=1", survival_curve_exact(g, Rational(1), fam, 5)[5] == Rational(1, 4));
    log.add("star3 P(C_E>3)=2/3 at delta=2", survival_curve_exact(g, Rational(2), fam, 3)[3] == Rational(2, 3));
  }

  // Cross-checks on every built-in graph.
  for (const auto& tag : fixtures::all_tags()) {
    const FiniteGraph g = fixtures::by_tag(tag);
    verify_graph(log, tag, g, cover_family(g), {0.5, 1.0, 2.0, 5.0});
  }

  // Simulation against the exact rate.
  {
    const FiniteGraph g = fixtures::star3();
    TailDecayOptions opt;
    for (long n = 5; n <= 25; ++n) opt.n_grid.push_back(n);
    opt.samples = 100000;
    opt.seed = seed;
    opt.window = std::make_pair(5L, 25L);
    const DecayEstimate est = estimate_tail_decay(g, 1.0, cover_family(g), opt);
    const double target = -0.5 * std::log(2.0);
    log.add("star3 Monte Carlo slope", std::abs(est.slope - target) <= 2.0 * est.std_error,
            "slope=" + fmt_num(est.slope) + " se=" + fmt_num(est.std_error));
  }

  // Exponential moments.
  for (const char* tag : {"star3", "path4"}) {
    const FiniteGraph g = fixtures::by_tag(tag);
    const DecreasingFamily fam = cover_family(g);
    const double a = exact_alpha_oracle(g, 1.0, fam).alpha;
    const auto curve = survival_curve(build_meta_chain(g, 1.0, fam), 2000);
    const bool ok = exp_moment_diagnostic(curve, 0.9 * a).converges && !exp_moment_diagnostic(curve, a).converges &&
                    !exp_moment_diagnostic(curve, 1.1 * a).converges;
    log.add(std::string(tag) + " exponential moment threshold at alpha_c", ok);
  }

  // Dependence on δ.
  {
    const FiniteGraph star = fixtures::star3();
    double worst_flat = 0.0, worst_lip = 0.0;
    bool mono = true;
    for (int i = 0; i <= 20; ++i) {
      const double x = 0.025 * i;
      const Measure nu = three_point(0.5, x, 0.5 - x);
      const double i1 = rate_I(star, 1.0, nu).value.value();
      worst_flat = std::max(worst_flat, std::abs(rate_I(star, 0.5, nu).value.value() - i1));
      double prev = i1, prev_d = 1.0;
      for (double d : {1.5, 2.0, 5.0}) {
        const double v = rate_I(star, d, nu).value.value();
        mono = mono && v <= prev + 1e-8;
        worst_lip = std::max(worst_lip, std::abs(v - prev) - std::log(d / prev_d));
        prev = v;
        prev_d = d;
      }
    }
    log.add("rate constant for delta<=1", worst_flat <= 1e-8, "max gap " + fmt_num(worst_flat));
    log.add("rate non-increasing for delta>=1", mono);
    log.add("rate continuity bound log(d2/d1)", worst_lip <= 1e-8);
    const Measure w = three_point(0.5, 0.45, 0.05);
    const double drop = rate_I(star, 1.0, w).value.value() - rate_I(star, 2.0, w).value.value();
    log.add("rate strict drop at witness", drop > 1e-3, "drop=" + fmt_num(drop));
    const Measure edge = three_point(0.5, 0.5, 0.0);
    const double h = 1e-3;
    const double mid = rate_I(star, 1.0, edge).value.value();
    const double left = (mid - rate_I(star, 1.0 - h, edge).value.value()) / h;
    const double right = (rate_I(star, 1.0 + h, edge).value.value() - mid) / h;
    log.add("rate not differentiable at delta=1", std::abs(left - right) > 0.1,
            "left=" + fmt_num(left) + " right=" + fmt_num(right));
    for (const char* tag : {"star3", "triangle"}) {
      const FiniteGraph g = fixtures::by_tag(tag);
      const double a = alpha_c(g, 0.001, cover_family(g)).alpha;
      log.add(std::string(tag) + " alpha_c(0.001) > 3", a > 3.0, fmt_num(a));
    }
    const FiniteGraph p4 = fixtures::path4();
    const double a = alpha_c(p4, 0.001, cover_family(p4)).alpha;
    log.add("path4 alpha_c(0.001) < 0.5", a < 0.5, fmt_num(a));
  }

  // Tail comparison between δ = 1 and δ = 2.
  for (const char* tag : {"star3", "path4"}) {
    const FiniteGraph g = fixtures::by_tag(tag);
    const DecreasingFamily fam = cover_family(g);
    const auto c1 = survival_curve(build_meta_chain(g, 1.0, fam), 2000);
    const auto c2 = survival_curve(build_meta_chain(g, 2.0, fam), 2000);
    const auto n = crossing_index(c1.log_survival, c2.log_survival);
    log.add(std::string(tag) + " tails cross by n=500", n && *n <= 500, n ? "N=" + std::to_string(*n) : "no crossing");
  }
  return log;
}

}  // namespace orrw
