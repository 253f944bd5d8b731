#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <unistd.h>

#include "orrw/cli.hpp"

using namespace orrw;
using namespace orrw::cli;

namespace {

const std::string kData = ORRW_DATA_DIR;

std::string graph(const std::string& name) { return kData + "/graphs/" + name + ".txt"; }

struct Parsed {
  ParseOutcome outcome;
  std::string out, err;
};

Parsed parse(std::vector<std::string> args) {
  args.insert(args.begin(), "orrw_cli");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  Parsed p;
  p.outcome = parse_args(static_cast<int>(argv.size()), argv.data(), out, err);
  p.out = out.str();
  p.err = err.str();
  return p;
}

struct Ran {
  int code = 0;
  std::string out, err;
};

Ran run_args(const std::vector<std::string>& args) {
  const Parsed p = parse(args);
  Ran r;
  if (!p.outcome.config) {
    r.code = p.outcome.exit_code;
    r.err = p.err;
    return r;
  }
  std::ostringstream out, err;
  r.code = run(*p.outcome.config, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::vector<std::string> lines(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

std::filesystem::path temp_file(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("orrw_test_" + std::to_string(::getpid()) + "_" + name);
}

}  // namespace

TEST(ParseArgs, ValidSimulateConfig) {
  const Parsed p = parse({"simulate", "--graph", "star3.txt", "--start", "0", "--delta", "2", "--samples", "100000",
                          "--seed", "7"});
  ASSERT_TRUE(p.outcome.config.has_value()) << p.err;
  const ExperimentConfig& c = *p.outcome.config;
  EXPECT_EQ(c.mode, Mode::Simulate);
  EXPECT_EQ(c.graph_path, "star3.txt");
  EXPECT_EQ(c.start, "0");
  EXPECT_EQ(*c.delta, 2.0);
  EXPECT_EQ(c.samples, 100000);
  EXPECT_EQ(c.seed, 7u);
}

TEST(ParseArgs, Defaults) {
  const Parsed p = parse({"alpha", "--graph", "g.txt", "--delta", "1"});
  ASSERT_TRUE(p.outcome.config.has_value());
  EXPECT_EQ(p.outcome.config->seed, 0u);
  EXPECT_EQ(p.outcome.config->family, "cover");
  EXPECT_TRUE(p.outcome.config->start.empty());
}

TEST(ParseArgs, Rejections) {
  EXPECT_EQ(parse({"alpha", "--graph", "g.txt", "--delta", "-1"}).outcome.exit_code, 2);
  EXPECT_EQ(parse({"alpha", "--graph", "g.txt", "--delta", "0"}).outcome.exit_code, 2);
  EXPECT_EQ(parse({"alpha", "--delta", "1"}).outcome.exit_code, 2);
  EXPECT_EQ(parse({"alpha", "--graph", "g.txt"}).outcome.exit_code, 2);
  EXPECT_EQ(parse({"sweep-alpha", "--graph", "g.txt", "--delta-grid", "0.1:10"}).outcome.exit_code, 2);
  EXPECT_EQ(parse({"sweep-alpha", "--graph", "g.txt", "--delta-grid", "0.1:x:5"}).outcome.exit_code, 2);
  EXPECT_EQ(parse({"sweep-alpha", "--graph", "g.txt", "--delta-grid", "0:1:5"}).outcome.exit_code, 2);
  EXPECT_EQ(parse({"simulate", "--graph", "g.txt", "--delta", "1", "--window", "9:3"}).outcome.exit_code, 2);
  EXPECT_EQ(parse({"rate", "--graph", "g.txt", "--delta", "1"}).outcome.exit_code, 2);
  EXPECT_EQ(parse({"sweep-rate", "--graph", "g.txt", "--delta", "1", "--nu-grid", "0:0.6:3", "--nu-family", "0,1,2"})
                .outcome.exit_code,
            2);
  EXPECT_NE(parse({"alpha", "--graph", "g.txt", "--delta", "1", "--bogus"}).outcome.exit_code, 0);
  EXPECT_NE(parse({}).outcome.exit_code, 0);
  EXPECT_NE(parse({"teleport"}).outcome.exit_code, 0);
  EXPECT_FALSE(parse({"alpha", "--delta", "1"}).err.empty());
}

TEST(ParseArgs, HelpListsFlags) {
  const Parsed top = parse({"--help"});
  EXPECT_FALSE(top.outcome.config.has_value());
  EXPECT_EQ(top.outcome.exit_code, 0);
  for (const char* sub : {"simulate", "survival", "alpha", "rate", "sweep-alpha", "sweep-rate", "verify"})
    EXPECT_NE(top.out.find(sub), std::string::npos) << sub;
  const Parsed p = parse({"simulate", "--help"});
  EXPECT_EQ(p.outcome.exit_code, 0);
  for (const char* flag : {"--graph", "--start", "--delta", "--delta-grid", "--family", "--samples", "--horizon",
                           "--seed", "--out", "--window"})
    EXPECT_NE(p.out.find(flag), std::string::npos) << flag;
}

TEST(CliRun, AlphaOnStar) {
  const Ran r = run_args({"alpha", "--graph", graph("star3"), "--start", "0", "--delta", "1"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto ls = lines(r.out);
  ASSERT_GE(ls.size(), 4u);
  EXPECT_EQ(ls[0].substr(0, 8), "alpha_c ");
  EXPECT_NEAR(std::stod(ls[0].substr(8)), 0.346574, 1e-6);
  EXPECT_EQ(ls[1].substr(0, 13), "attaining_E0 ");
  EXPECT_NE(ls[1].find("0-1"), std::string::npos);
}

TEST(CliRun, SweepAlphaFiftyRowsDecreasing) {
  const Ran r = run_args({"sweep-alpha", "--graph", graph("path4"), "--start", "1", "--delta-grid", "0.1:10:50"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto ls = lines(r.out);
  ASSERT_EQ(ls.size(), 51u);
  EXPECT_EQ(ls[0], "delta,alpha_c");
  double prev = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < ls.size(); ++i) {
    const double a = std::stod(ls[i].substr(ls[i].find(',') + 1));
    EXPECT_LT(a, prev);
    prev = a;
  }
}

TEST(CliRun, SimulateIsByteIdenticalForFixedSeed) {
  const std::vector<std::string> args{"simulate", "--graph", graph("triangle"), "--start", "1", "--delta", "2",
                                      "--samples", "5000", "--seed", "11", "--horizon", "15"};
  const Ran a = run_args(args), b = run_args(args);
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_EQ(a.out, b.out);
  EXPECT_EQ(lines(a.out)[0], "n,survivors,samples,p_hat,stderr");
  EXPECT_EQ(lines(a.out).size(), 16u);
  auto other = args;
  other[10] = "12";
  EXPECT_NE(run_args(other).out, a.out);
}

TEST(CliRun, OutFileMatchesStdout) {
  const auto path = temp_file("survival.csv");
  const std::vector<std::string> args{"survival", "--graph", graph("path4"), "--delta", "1.5", "--horizon", "40"};
  const Ran to_stdout = run_args(args);
  auto with_out = args;
  with_out.insert(with_out.end(), {"--out", path.string()});
  const Ran to_file = run_args(with_out);
  ASSERT_EQ(to_file.code, 0) << to_file.err;
  EXPECT_TRUE(to_file.out.empty());
  std::ifstream in(path);
  std::stringstream buf;
  buf << in.rdbuf();
  EXPECT_EQ(buf.str(), to_stdout.out);
  EXPECT_EQ(lines(buf.str())[0], "n,survival,log_survival");
  EXPECT_EQ(lines(buf.str())[1], "0,1,0");
  std::filesystem::remove(path);
}

TEST(CliRun, RateAndSweepRate) {
  const Ran r = run_args({"rate", "--graph", graph("star3"), "--delta", "2", "--nu", "0.5,0.05,0.45"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto ls = lines(r.out);
  EXPECT_NEAR(std::stod(ls[0].substr(8)), 0.05 * std::log(0.5) + 0.45 * std::log(1.5), 1e-8);
  EXPECT_EQ(ls[1].substr(0, 19), "attaining_sequence ");

  const Ran inf = run_args({"rate", "--graph", graph("star3"), "--delta", "2", "--nu", "0.2,0.4,0.4"});
  EXPECT_EQ(lines(inf.out)[0], "I_delta inf");

  const Ran s = run_args({"sweep-rate", "--graph", graph("path3"), "--delta", "2", "--nu-family", "1,0,2", "--nu-grid",
                          "0:0.5:11"});
  ASSERT_EQ(s.code, 0) << s.err;
  const auto rows = lines(s.out);
  ASSERT_EQ(rows.size(), 12u);
  EXPECT_EQ(rows[0], "nu_param,I_delta,attaining_sequence");
  EXPECT_EQ(rows[6].substr(0, 5), "0.25,");
  EXPECT_NEAR(std::stod(rows[6].substr(5)), 0.0, 1e-9);
}

TEST(CliRun, ErrorsReported) {
  const Ran missing = run_args({"alpha", "--graph", kData + "/graphs/none.txt", "--delta", "1"});
  EXPECT_NE(missing.code, 0);
  EXPECT_NE(missing.err.find("cannot open"), std::string::npos);
  const Ran bad_start = run_args({"alpha", "--graph", graph("star3"), "--start", "9", "--delta", "1"});
  EXPECT_NE(bad_start.code, 0);
  const Ran bad_nu = run_args({"rate", "--graph", graph("star3"), "--delta", "1", "--nu", "0.5,0.5"});
  EXPECT_EQ(bad_nu.code, 2);
}

TEST(CliRun, FamilyFile) {
  const auto path = temp_file("family.txt");
  {
    std::ofstream f(path);
    f << "# keep the walk on the first two edges\n0-1 1-2\n";
  }
  const std::vector<std::string> base{"alpha", "--graph", graph("path4"), "--delta", "1", "--family", path.string()};
  const Ran strict = run_args(base);
  EXPECT_NE(strict.code, 0);  // {0-1,1-2} alone is not closed downward
  auto closed = base;
  closed.push_back("--close-family");
  const Ran r = run_args(closed);
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.err.find("warning"), std::string::npos);
  EXPECT_NEAR(std::stod(lines(r.out)[0].substr(8)), 0.5 * std::log(4.0 / 3.0), 1e-9);
  std::filesystem::remove(path);
}

TEST(CliRun, VerifyGraphFile) {
  const Ran r = run_args({"verify", "--graph", graph("paw")});
  EXPECT_EQ(r.code, 0) << r.out;
  for (const auto& l : lines(r.out)) EXPECT_EQ(l.substr(0, 4), "PASS") << l;
}
