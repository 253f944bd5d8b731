// Acceptance battery: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "orrw/closed_forms.hpp"
#include "orrw/orrw.hpp"

using namespace orrw;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

oracle::Graph plain(const FiniteGraph& g) {
  oracle::Graph o;
  o.n = g.num_vertices();
  for (int e = 0; e < g.num_edges(); ++e) o.edges.push_back(g.endpoints(e));
  return o;
}

double rate(const FiniteGraph& g, double d, const Measure& nu) { return rate_I(g, d, nu).value.value(); }

Measure three(double a, double b, double c) {
  Measure nu(3);
  nu << a, b, c;
  return nu;
}

Outcome closed_form_alpha() {
  double worst = 0.0;
  for (const auto& tag : fixtures::closed_form_tags()) {
    const FiniteGraph g = fixtures::by_tag(tag);
    const DecreasingFamily fam = cover_family(g);
    for (double d : {0.3, 0.5, 1.0, 2.0, 5.0, 20.0}) {
      const double want = closed::alpha_closed(tag, d);
      worst = std::max({worst, std::abs(alpha_c(g, d, fam).alpha - want),
                        std::abs(alpha_c_boundary_form(g, d, fam).alpha - want),
                        std::abs(exact_alpha_oracle(g, d, fam).alpha - want)});
    }
  }
  return {worst <= 1e-6, "max error " + fmt(worst)};
}

Outcome rate_reproduction() {
  double worst = 0.0;
  const FiniteGraph star = fixtures::star3(), path = fixtures::path3();
  for (double d : {0.5, 1.0, 2.0, 5.0}) {
    for (int i = 0; i <= 20; ++i) {
      const double x = 0.025 * i;
      worst = std::max(worst, std::abs(rate(star, d, three(0.5, x, 0.5 - x)) - closed::star3_rate(d, x)));
      worst = std::max(worst, std::abs(rate(path, d, three(x, 0.5, 0.5 - x)) - closed::path3_rate(d, x)));
    }
  }
  return {worst <= 1e-4, "max error " + fmt(worst)};
}

Outcome exact_survival() {
  const FiniteGraph g = fixtures::star3();
  const DecreasingFamily fam = cover_family(g);
  const auto alive = [&](unsigned m) { return fam.contains(EdgeSubset(m)); };
  bool ok = true;
  double worst = 0.0;
  for (int d : {1, 2}) {
    const auto exact = survival_curve_exact(g, Rational(d), fam, 12);
    const SurvivalCurve fl = survival_curve(build_meta_chain(g, d, fam), 12);
    for (int n = 0; n <= 12; ++n) {
      const Rational brute = oracle::enumerate_survival<Rational>(plain(g), Rational(d), n, alive);
      ok = ok && exact[n] == brute;
      worst = std::max(worst, std::abs(fl.survival[n] - static_cast<double>(brute)));
    }
  }
  const bool p5 = survival_curve_exact(g, Rational(1), fam, 5)[5] == Rational(1, 4);
  const bool p3 = survival_curve_exact(g, Rational(2), fam, 3)[3] == Rational(2, 3);
  return {ok && worst <= 1e-12 && p5 && p3, std::string("rational ") + (ok ? "exact" : "MISMATCH") +
                                                 ", double max error " + fmt(worst) + ", P(C>5)=1/4 " +
                                                 (p5 ? "ok" : "wrong") + ", P(C>3)=2/3 " + (p3 ? "ok" : "wrong")};
}

Outcome decay_consistency() {
  double worst_slope = 0.0, worst_band = 1.0;
  std::string where;
  for (const auto& tag : fixtures::all_tags()) {
    const FiniteGraph g = fixtures::by_tag(tag);
    if (g.num_edges() > 6) continue;
    const DecreasingFamily fam = cover_family(g);
    for (double d : {0.5, 1.0, 2.0, 5.0}) {
      const double a = alpha_c(g, d, fam).alpha;
      const SurvivalCurve c = survival_curve(build_meta_chain(g, d, fam), 200);
      const double err = std::abs(-c.log_survival[200] / 200.0 - a);
      if (err > worst_slope) {
        worst_slope = err;
        where = tag + " delta=" + fmt(d);
      }
      double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
      for (int n = 20; n <= 200; ++n) {
        const double v = std::exp(n * a + c.log_survival[n]);
        lo = std::min(lo, v);
        hi = std::max(hi, v);
      }
      worst_band = std::max(worst_band, lo > 0.0 ? hi / lo : std::numeric_limits<double>::infinity());
    }
  }
  const bool slope_ok = worst_slope <= 1e-3;
  const bool band_ok = worst_band <= 10.0;
  return {slope_ok && band_ok, "max |-(1/200)log P - alpha_c| " + fmt(worst_slope) + " at " + where +
                                   (slope_ok ? "" : " (exceeds 1e-3)") + ", band max/min " + fmt(worst_band)};
}

Outcome monte_carlo() {
  const FiniteGraph g = fixtures::star3();
  TailDecayOptions opt;
  for (long n = 5; n <= 25; ++n) opt.n_grid.push_back(n);
  opt.samples = 100000;
  opt.window = std::make_pair(5L, 25L);
  opt.threads = 1;
  const DecayEstimate est = estimate_tail_decay(g, 1.0, cover_family(g), opt);
  const double target = -0.346574;
  const double z = std::abs(est.slope - target) / est.std_error;
  return {z <= 2.0, "slope " + fmt(est.slope) + " se " + fmt(est.std_error) + " (" + fmt(z) + " se from target)"};
}

Outcome moments() {
  bool ok = true;
  std::string detail;
  for (const char* tag : {"star3", "path4"}) {
    const FiniteGraph g = fixtures::by_tag(tag);
    const DecreasingFamily fam = cover_family(g);
    for (double d : {1.0, 2.0}) {
      const double a = alpha_c(g, d, fam).alpha;
      const SurvivalCurve c = survival_curve(build_meta_chain(g, d, fam), 2000);
      const bool good = exp_moment_diagnostic(c, 0.9 * a).converges && !exp_moment_diagnostic(c, a).converges &&
                        !exp_moment_diagnostic(c, 1.1 * a).converges;
      ok = ok && good;
      if (!good) detail += std::string(tag) + " delta=" + fmt(d) + " wrong; ";
    }
  }
  return {ok, ok ? "converges at 0.9 alpha_c, diverges at alpha_c and 1.1 alpha_c" : detail};
}

Outcome analytic_battery() {
  const FiniteGraph star = fixtures::star3(), path = fixtures::path3();
  std::vector<std::pair<const FiniteGraph*, Measure>> grid;
  for (int i = 0; i <= 20; ++i) {
    const double x = 0.025 * i;
    grid.push_back({&star, three(0.5, x, 0.5 - x)});
    grid.push_back({&path, three(x, 0.5, 0.5 - x)});
  }
  const FiniteGraph tri = fixtures::triangle();
  grid.push_back({&tri, three(0.2, 0.3, 0.5)});
  grid.push_back({&tri, three(0.4, 0.35, 0.25)});

  std::vector<std::string> failed;
  double flat = 0.0, lip = -1.0;
  bool mono = true;
  const std::vector<double> deltas{1.0, 1.5, 2.0, 5.0};
  for (const auto& [g, nu] : grid) {
    const double i1 = rate(*g, 1.0, nu);
    if (!std::isfinite(i1)) continue;
    flat = std::max(flat, std::abs(rate(*g, 0.5, nu) - i1));
    std::vector<double> v{i1};
    for (std::size_t k = 1; k < deltas.size(); ++k) v.push_back(rate(*g, deltas[k], nu));
    for (std::size_t k = 1; k < v.size(); ++k) {
      mono = mono && v[k] <= v[k - 1] + 1e-8;
      for (std::size_t j = 0; j < k; ++j) lip = std::max(lip, std::abs(v[k] - v[j]) - std::log(deltas[k] / deltas[j]));
    }
  }
  if (flat > 1e-8) failed.push_back("(i) gap " + fmt(flat));
  const Measure w = three(0.5, 0.45, 0.05);
  const double drop = rate(star, 1.0, w) - rate(star, 2.0, w);
  if (!mono || drop <= 1e-3) failed.push_back("(ii) drop " + fmt(drop));
  if (lip > 1e-8) failed.push_back("(iii) excess " + fmt(lip));

  const Measure edge = three(0.5, 0.5, 0.0);
  const double h = 1e-3, mid = rate(star, 1.0, edge);
  const double left = (mid - rate(star, 1.0 - h, edge)) / h, right = (rate(star, 1.0 + h, edge) - mid) / h;
  if (std::abs(left - right) <= 0.1) failed.push_back("(iv) left " + fmt(left) + " right " + fmt(right));

  bool dec = true;
  for (const auto& tag : fixtures::all_tags()) {
    const FiniteGraph g = fixtures::by_tag(tag);
    const auto rows = sweep_alpha(g, cover_family(g), log_spaced_grid(0.01, 100.0, 25));
    for (std::size_t i = 1; i < rows.size(); ++i) dec = dec && rows[i].alpha < rows[i - 1].alpha - 1e-9;
  }
  if (!dec) failed.push_back("(v)");

  const double s = alpha_c(star, 0.001, cover_family(star)).alpha;
  const double t = alpha_c(tri, 0.001, cover_family(tri)).alpha;
  const FiniteGraph p4 = fixtures::path4();
  const double p = alpha_c(p4, 0.001, cover_family(p4)).alpha;
  if (!(s > 3.0 && t > 3.0 && p < 0.5)) failed.push_back("(vi) " + fmt(s) + " " + fmt(t) + " " + fmt(p));

  std::string detail = "(i)-(vi)";
  if (!failed.empty()) {
    detail = "failed:";
    for (const auto& f : failed) detail += " " + f;
  }
  return {failed.empty(), detail};
}

Outcome crossing() {
  bool ok = true;
  std::string detail;
  for (const char* tag : {"star3", "path4"}) {
    const FiniteGraph g = fixtures::by_tag(tag);
    const DecreasingFamily fam = cover_family(g);
    const auto c1 = survival_curve(build_meta_chain(g, 1.0, fam), 2000);
    const auto c2 = survival_curve(build_meta_chain(g, 2.0, fam), 2000);
    const auto n = crossing_index(c1.log_survival, c2.log_survival);
    ok = ok && n && *n <= 500;
    detail += std::string(tag) + " N=" + (n ? std::to_string(*n) : "none") + " ";
  }
  return {ok, detail};
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    double budget_s;  // 0: no runtime bound
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria{
      {"1 closed-form alpha_c", 5.0, closed_form_alpha},
      {"2 rate function closed forms", 60.0, rate_reproduction},
      {"3 exact survival vs enumeration", 0.0, exact_survival},
      {"4 decay rate at n=200 and prefactor band", 0.0, decay_consistency},
      {"5 Monte Carlo slope", 30.0, monte_carlo},
      {"6 exponential moment threshold", 0.0, moments},
      {"7 analytic properties", 0.0, analytic_battery},
      {"8 tail crossing", 0.0, crossing},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (c.budget_s > 0.0 && secs >= c.budget_s) {
      o.pass = false;
      o.detail += "; over the " + fmt(c.budget_s) + " s budget";
    }
    std::printf("%s criterion %s: %s [%.2f s]\n", o.pass ? "PASS" : "FAIL", c.name, o.detail.c_str(), secs);
    std::fflush(stdout);
    failures += o.pass ? 0 : 1;
  }
  return failures == 0 ? 0 : 1;
}
