#pragma once

// Command-line front end: argument parsing into an ExperimentConfig and the
// dispatch that writes CSV tables.

#include <CLI11.hpp>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "orrw/orrw.hpp"
#include "orrw/verify.hpp"

namespace orrw::cli {

enum class Mode { Simulate, Survival, Alpha, Rate, SweepAlpha, SweepRate, Verify };

struct GridSpec {
  double lo = 0.0;
  double hi = 0.0;
  int n = 0;
};

struct ExperimentConfig {
  Mode mode = Mode::Verify;
  std::string graph_path;
  std::string start;  // empty: first label in the graph file
  std::optional<double> delta;
  std::optional<GridSpec> delta_grid;
  std::string family = "cover";
  bool close_family = false;
  long samples = 100000;
  std::optional<long> horizon;
  std::uint64_t seed = 0;
  std::string out;
  std::optional<std::pair<long, long>> window;
  std::vector<double> nu;
  std::vector<std::string> nu_family;  // labels H, A, B: ν(H) = 1/2, ν(A) = x, ν(B) = 1/2 − x
  std::optional<GridSpec> nu_grid;
};

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, sep)) out.push_back(item);
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

inline double to_double(const std::string& s, const std::string& what) {
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &pos);
  } catch (const std::exception&) {
    throw UsageError("malformed number in " + what + ": '" + s + "'");
  }
  if (pos != s.size()) throw UsageError("malformed number in " + what + ": '" + s + "'");
  return v;
}

inline long to_long(const std::string& s, const std::string& what) {
  std::size_t pos = 0;
  long v = 0;
  try {
    v = std::stol(s, &pos);
  } catch (const std::exception&) {
    throw UsageError("malformed integer in " + what + ": '" + s + "'");
  }
  if (pos != s.size()) throw UsageError("malformed integer in " + what + ": '" + s + "'");
  return v;
}

/// "lo:hi:n".
inline GridSpec parse_grid(const std::string& s, const std::string& what) {
  const auto parts = split(s, ':');
  if (parts.size() != 3) throw UsageError(what + " must look like lo:hi:n");
  GridSpec g{to_double(parts[0], what), to_double(parts[1], what), static_cast<int>(to_long(parts[2], what))};
  if (g.n < 1 || !(g.hi >= g.lo)) throw UsageError(what + ": need hi >= lo and n >= 1");
  return g;
}

struct ParseOutcome {
  std::optional<ExperimentConfig> config;
  int exit_code = 0;  // meaningful when config is empty (help or error)
};

inline ParseOutcome parse_args(int argc, const char* const* argv, std::ostream& out = std::cout,
                               std::ostream& err = std::cerr) {
  CLI::App app{"Once-reinforced random walk lab: simulation, exact tails, rate function and critical exponent"};
  app.require_subcommand(1);
  ExperimentConfig cfg;
  std::string delta_grid, window, nu, nu_family, nu_grid;
  std::optional<double> delta;
  std::optional<long> horizon;

  struct Sub {
    const char* name;
    Mode mode;
    const char* help;
  };
  const Sub subs[] = {
      {"simulate", Mode::Simulate, "Monte Carlo survival fractions and fitted decay slope"},
      {"survival", Mode::Survival, "exact survival curve P(T > n)"},
      {"alpha", Mode::Alpha, "critical exponent alpha_c at one delta"},
      {"rate", Mode::Rate, "rate function I_delta at one measure"},
      {"sweep-alpha", Mode::SweepAlpha, "alpha_c over a log-spaced delta grid"},
      {"sweep-rate", Mode::SweepRate, "I_delta over a one-parameter family of measures"},
      {"verify", Mode::Verify, "run the built-in self-check battery"},
  };
  for (const auto& s : subs) {
    CLI::App* sc = app.add_subcommand(s.name, s.help);
    sc->add_option("--graph", cfg.graph_path, "edge-list file, one 'u v' pair per line");
    sc->add_option("--start", cfg.start, "start vertex label (default: first label in the file)");
    sc->add_option("--delta", delta, "reinforcement parameter (> 0)");
    sc->add_option("--delta-grid", delta_grid, "log-spaced grid lo:hi:n");
    sc->add_option("--family", cfg.family, "'cover' or a file of edge subsets, one subset per line as 'a-b c-d ...'");
    sc->add_flag("--close-family", cfg.close_family, "replace a family file by its downward closure");
    sc->add_option("--samples", cfg.samples, "Monte Carlo sample count");
    sc->add_option("--horizon", horizon, "largest n (simulate default 25, survival default 200)");
    sc->add_option("--seed", cfg.seed, "random seed");
    sc->add_option("--out", cfg.out, "CSV output path (default: stdout)");
    sc->add_option("--window", window, "regression window lo:hi");
    sc->add_option("--nu", nu, "measure as comma-separated masses in vertex order");
    sc->add_option("--nu-family", nu_family, "labels H,A,B for nu(H)=1/2, nu(A)=x, nu(B)=1/2-x");
    sc->add_option("--nu-grid", nu_grid, "linear grid of x, lo:hi:n");
    sc->callback([&cfg, m = s.mode] { cfg.mode = m; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return {std::nullopt, app.exit(e, out, err)};
  }

  try {
    cfg.delta = delta;
    cfg.horizon = horizon;
    if (delta && !(*delta > 0.0)) throw UsageError("--delta must be positive");
    if (!delta_grid.empty()) {
      cfg.delta_grid = parse_grid(delta_grid, "--delta-grid");
      if (!(cfg.delta_grid->lo > 0.0)) throw UsageError("--delta-grid must be positive");
    }
    if (!window.empty()) {
      const auto parts = split(window, ':');
      if (parts.size() != 2) throw UsageError("--window must look like lo:hi");
      cfg.window = std::make_pair(to_long(parts[0], "--window"), to_long(parts[1], "--window"));
      if (cfg.window->first > cfg.window->second) throw UsageError("--window: lo must not exceed hi");
    }
    if (!nu.empty())
      for (const auto& p : split(nu, ',')) cfg.nu.push_back(to_double(p, "--nu"));
    if (!nu_family.empty()) {
      cfg.nu_family = split(nu_family, ',');
      if (cfg.nu_family.size() != 3) throw UsageError("--nu-family needs three labels");
    }
    if (!nu_grid.empty()) {
      cfg.nu_grid = parse_grid(nu_grid, "--nu-grid");
      if (cfg.nu_grid->lo < 0.0 || cfg.nu_grid->hi > 0.5) throw UsageError("--nu-grid must lie in [0, 0.5]");
    }
    if (cfg.samples < 1) throw UsageError("--samples must be positive");
    if (cfg.horizon && *cfg.horizon < 1) throw UsageError("--horizon must be positive");

    const Mode m = cfg.mode;
    if (m != Mode::Verify && cfg.graph_path.empty()) throw UsageError("--graph is required");
    const bool needs_delta = m == Mode::Simulate || m == Mode::Survival || m == Mode::Alpha || m == Mode::Rate ||
                             m == Mode::SweepRate;
    if (needs_delta && !cfg.delta) throw UsageError("--delta is required");
    if (m == Mode::SweepAlpha && !cfg.delta_grid) throw UsageError("--delta-grid is required");
    if (m == Mode::Rate && cfg.nu.empty()) throw UsageError("--nu is required");
    if (m == Mode::SweepRate && (cfg.nu_family.empty() || !cfg.nu_grid))
      throw UsageError("--nu-family and --nu-grid are required");
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return {std::nullopt, 2};
  }
  return {cfg, 0};
}

inline std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

inline std::string num(const ExtendedReal& v) { return v.is_infinite() ? "inf" : num(v.value()); }

inline FiniteGraph load_graph(const ExperimentConfig& cfg) {
  std::ifstream in(cfg.graph_path);
  if (!in) throw GraphError("cannot open graph file '" + cfg.graph_path + "'");
  const auto pairs = parse_edge_list(in);
  if (pairs.empty()) throw GraphError("graph file '" + cfg.graph_path + "' has no edges");
  return build_graph(pairs, cfg.start.empty() ? pairs.front().first : cfg.start);
}

/// Family file: one subset per line, edges written 'a-b' and separated by spaces.
inline DecreasingFamily load_family(const FiniteGraph& g, const ExperimentConfig& cfg, std::ostream& err) {
  if (cfg.family == "cover") return cover_family(g);
  std::ifstream in(cfg.family);
  if (!in) throw GraphError("cannot open family file '" + cfg.family + "'");
  std::vector<EdgeSubset> members;
  std::string line;
  while (std::getline(in, line)) {
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream ls(line);
    std::string tok;
    EdgeSubset s;
    while (ls >> tok) {
      const auto dash = tok.find('-');
      if (dash == std::string::npos) throw GraphError("family file: malformed edge '" + tok + "'");
      const auto u = g.find_vertex(tok.substr(0, dash));
      const auto v = g.find_vertex(tok.substr(dash + 1));
      const auto e = (u && v) ? g.edge_between(*u, *v) : std::nullopt;
      if (!e) throw GraphError("family file: '" + tok + "' is not an edge");
      s = s.with(*e);
    }
    members.push_back(s);
  }
  if (cfg.close_family) {
    auto fam = downward_closure(g, members);
    if (fam.size() != members.size()) err << "warning: family closed downward (" << fam.size() << " members)\n";
    return fam;
  }
  return DecreasingFamily::make(g, members);
}

class CsvSink {
 public:
  CsvSink(const std::string& path, std::ostream& fallback) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_) throw std::runtime_error("cannot write '" + path + "'");
    }
    os_ = path.empty() ? &fallback : &file_;
  }
  std::ostream& stream() { return *os_; }

 private:
  std::ofstream file_;
  std::ostream* os_;
};

inline std::vector<double> delta_values(const GridSpec& g) { return log_spaced_grid(g.lo, g.hi, g.n); }

inline int run(const ExperimentConfig& cfg, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  try {
    if (cfg.mode == Mode::Verify) {
      CheckLog log;
      if (cfg.graph_path.empty()) {
        log = verify_fixtures(cfg.seed);
      } else {
        const FiniteGraph g = load_graph(cfg);
        std::vector<double> deltas{0.5, 1.0, 2.0, 5.0};
        if (cfg.delta_grid) deltas = delta_values(*cfg.delta_grid);
        verify_graph(log, cfg.graph_path, g, load_family(g, cfg, err), deltas);
      }
      log.print(out);
      return log.all_passed() ? 0 : 1;
    }

    const FiniteGraph g = load_graph(cfg);
    switch (cfg.mode) {
      case Mode::Simulate: {
        const DecreasingFamily fam = load_family(g, cfg, err);
        TailDecayOptions opt;
        for (long n = 1; n <= cfg.horizon.value_or(25); ++n) opt.n_grid.push_back(n);
        opt.samples = cfg.samples;
        opt.seed = cfg.seed;
        opt.window = cfg.window;
        const DecayEstimate est = estimate_tail_decay(g, *cfg.delta, fam, opt);
        CsvSink sink(cfg.out, out);
        sink.stream() << "n,survivors,samples,p_hat,stderr\n";
        for (const auto& p : est.table)
          sink.stream() << p.n << ',' << p.survivors << ',' << p.samples << ',' << num(p.p_hat) << ','
                        << num(p.std_error) << '\n';
        for (const auto& w : est.warnings) err << "warning: " << w << '\n';
        err << "slope " << num(est.slope) << " stderr " << num(est.std_error) << " window " << est.n_lo << ':'
            << est.n_hi << '\n';
        return 0;
      }
      case Mode::Survival: {
        const DecreasingFamily fam = load_family(g, cfg, err);
        const SurvivalCurve c = survival_curve(build_meta_chain(g, *cfg.delta, fam), cfg.horizon.value_or(200));
        CsvSink sink(cfg.out, out);
        sink.stream() << "n,survival,log_survival\n";
        for (long n = 0; n <= c.n_max(); ++n)
          sink.stream() << n << ',' << num(c.survival[n]) << ',' << num(c.log_survival[n]) << '\n';
        return 0;
      }
      case Mode::Alpha: {
        const DecreasingFamily fam = load_family(g, cfg, err);
        const AlphaResult a = alpha_c(g, *cfg.delta, fam);
        const AlphaResult b = alpha_c_boundary_form(g, *cfg.delta, fam);
        const AlphaOracleResult s = exact_alpha_oracle(g, *cfg.delta, fam);
        out << "alpha_c " << num(a.alpha) << '\n';
        out << "attaining_E0 " << g.subset_name(a.argmin) << '\n';
        out << "boundary_form " << num(b.alpha) << '\n';
        out << "spectral " << num(s.alpha) << '\n';
        if (a.unstoppable) out << "unstoppable 1\n";
        return 0;
      }
      case Mode::Rate: {
        if (static_cast<int>(cfg.nu.size()) != g.num_vertices())
          throw UsageError("--nu needs one mass per vertex (" + std::to_string(g.num_vertices()) + ")");
        const Measure nu = Eigen::Map<const Eigen::VectorXd>(cfg.nu.data(), static_cast<Eigen::Index>(cfg.nu.size()));
        const RateValue r = rate_I(g, *cfg.delta, nu);
        out << "I_delta " << num(r.value) << '\n';
        if (r.decomposition) out << "attaining_sequence " << sequence_name(g, r.decomposition->sequence) << '\n';
        return 0;
      }
      case Mode::SweepAlpha: {
        const DecreasingFamily fam = load_family(g, cfg, err);
        const auto rows = sweep_alpha(g, fam, delta_values(*cfg.delta_grid));
        CsvSink sink(cfg.out, out);
        sink.stream() << "delta,alpha_c\n";
        for (const auto& r : rows) sink.stream() << num(r.delta) << ',' << num(r.alpha) << '\n';
        return 0;
      }
      case Mode::SweepRate: {
        std::vector<int> idx;
        for (const auto& l : cfg.nu_family) {
          const auto v = g.find_vertex(l);
          if (!v) throw UsageError("--nu-family: unknown vertex '" + l + "'");
          idx.push_back(*v);
        }
        if (g.num_vertices() != 3 || idx[0] == idx[1] || idx[1] == idx[2] || idx[0] == idx[2])
          throw UsageError("--nu-family needs the three distinct vertices of a 3-vertex graph");
        std::vector<std::pair<double, Measure>> grid;
        const GridSpec& s = *cfg.nu_grid;
        for (int i = 0; i < s.n; ++i) {
          const double x = s.n == 1 ? s.lo : s.lo + (s.hi - s.lo) * i / (s.n - 1);
          Measure nu = Measure::Zero(3);
          nu(idx[0]) = 0.5;
          nu(idx[1]) = x;
          nu(idx[2]) = 0.5 - x;
          grid.emplace_back(x, nu);
        }
        const auto rows = sweep_rate(g, *cfg.delta, grid);
        CsvSink sink(cfg.out, out);
        sink.stream() << "nu_param,I_delta,attaining_sequence\n";
        for (const auto& r : rows) sink.stream() << num(r.param) << ',' << num(r.value) << ',' << r.sequence << '\n';
        return 0;
      }
      case Mode::Verify:
        break;
    }
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

}  // namespace orrw::cli
