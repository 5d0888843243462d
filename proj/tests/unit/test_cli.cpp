#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "commands.hpp"
#include "config.hpp"
#include "iprox/iteration.hpp"

using namespace iprox;
using namespace iprox::cli;
namespace fs = std::filesystem;

namespace {

std::string read_file(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

fs::path scratch(const std::string& name) {
  const fs::path d = fs::temp_directory_path() / ("iprox_cli_test_" + name);
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

std::string error_of(std::string_view text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST(Config, MinimalUsesDefaults) {
  const RunConfig c = parse_config("[approx]\nkind = b\n");
  RunConfig want;
  want.approx.kind = ApproxKind::b;
  EXPECT_EQ(c, want);
  EXPECT_EQ(parse_config(""), RunConfig{});
  EXPECT_DOUBLE_EQ(c.step(), 2.0 / 3.0);
}

TEST(Config, Diagnostics) {
  const std::string kind = error_of("[penalty]\nkind = l1\n[approx]\nkind = g\n");
  EXPECT_NE(kind.find("unknown approximation kind"), std::string::npos) << kind;
  EXPECT_NE(kind.find("line 4"), std::string::npos) << kind;
  const std::string eps = error_of("[approx]\neps = -1\n");
  EXPECT_NE(eps.find("line 2"), std::string::npos) << eps;
  EXPECT_NE(eps.find("eps"), std::string::npos) << eps;
  EXPECT_NE(error_of("[approx]\nepsilon = 1\n").find("unknown key 'epsilon'"), std::string::npos);
  EXPECT_NE(error_of("[approx]\neps = abc\n").find("expected a number"), std::string::npos);
  EXPECT_NE(error_of("[algorithm]\ntau = 0\n").find("tau"), std::string::npos);
  EXPECT_NE(error_of("[nope]\n").find("line 1"), std::string::npos);
  EXPECT_NE(error_of("eps = 1\n").find("line 1"), std::string::npos);
}

TEST(Config, RoundTrip) {
  RunConfig c;
  c.penalty.kind = PenaltyKind::mcp;
  c.penalty.gamma = 0.7;
  c.penalty.b = 3.0;
  c.approx.kind = ApproxKind::e;
  c.approx.eps = 0.1 / 3.0;
  c.approx.policy = "boundary";
  c.approx.seed = 17;
  c.algorithm.kind = Algorithm::pr;
  c.algorithm.order = Order::f_first;
  c.algorithm.tau = 0.3;
  c.schedule.kind = ScheduleKind::geometric;
  c.schedule.ratio = 0.8;
  c.output.plot = "trace.svg";
  const RunConfig back = parse_config(to_text(c));
  EXPECT_EQ(back, c);
  EXPECT_EQ(to_text(back), to_text(c));
  EXPECT_EQ(parse_config(to_text(RunConfig{})), RunConfig{});
}

TEST(Config, EnvironmentOverride) {
  ::setenv("IPROX_APPROX_EPS", "0.25", 1);
  const RunConfig c = parse_config("[approx]\neps = 0.1\n", true);
  ::unsetenv("IPROX_APPROX_EPS");
  EXPECT_DOUBLE_EQ(c.approx.eps, 0.25);
  ::setenv("IPROX_APPROX_EPS", "-3", 1);
  std::string msg;
  try {
    parse_config("", true);
  } catch (const ConfigError& e) {
    msg = e.what();
  }
  ::unsetenv("IPROX_APPROX_EPS");
  EXPECT_NE(msg.find("IPROX_APPROX_EPS"), std::string::npos) << msg;
}

TEST(Commands, BoundsLine) {
  EXPECT_EQ(bounds_line(ApproxKind::a, 0.1, {}), "sigma=0.1 L=L_psi gamma=0.2");
  BoundConstants c;
  c.L_psi = 0.5;
  EXPECT_EQ(bounds_line(ApproxKind::b, 0.1, c), "sigma=0.05 L=0.5 gamma=0.1");
}

TEST(Commands, ZeroEpsMatchesExactRun) {
  RunConfig c = parse_config("[penalty]\nkind = l1\n[approx]\nkind = c\neps = 0\n[algorithm]\nkind = dr\niterations = 50\n");
  const fs::path dir = scratch("exact");
  std::ostringstream log;
  ASSERT_EQ(cmd_run(c, dir.string(), log), 0);

  SplittingProblem prob;
  prob.algorithm = Algorithm::dr;
  prob.f = c.make_smooth_term();
  prob.tau = c.step();
  const Penalty p = c.make_penalty();
  const ApproxFactory exact = [&](double) {
    return make_type_a(p, prob.tau, 0.0, Policy::exact());
  };
  const Vec target = reference_fixed_point(prob, p, prob.tau, c.start());
  const Trace t = run_splitting(prob, exact, Schedule::constant(0.0), c.start(), 50, target);
  const std::string csv = read_file(dir / "trace.csv");
  std::istringstream lines(csv);
  std::string line;
  std::getline(lines, line);
  for (std::size_t k = 0; k < t.size(); ++k) {
    ASSERT_TRUE(std::getline(lines, line));
    std::istringstream cells(line);
    std::string cell;
    std::getline(cells, cell, ',');
    for (int i = 0; i < 2; ++i) {
      std::getline(cells, cell, ',');
      EXPECT_EQ(std::stod(cell), t.iterates[k][i]) << "k=" << k;
    }
  }
}

TEST(Commands, RunIsByteDeterministic) {
  const RunConfig c = parse_config(
      "[penalty]\nkind = l2\n[approx]\nkind = f\neps = 0.01\nsamples = 2000\npilot_samples = 200\n"
      "[algorithm]\niterations = 15\n[output]\nplot = trace.svg\n");
  const fs::path a = scratch("det_a"), b = scratch("det_b");
  std::ostringstream la, lb;
  ASSERT_EQ(cmd_run(c, a.string(), la), 0);
  ASSERT_EQ(cmd_run(c, b.string(), lb), 0);
  for (const char* f : {"trace.csv", "manifest.json", "trace.svg"}) {
    EXPECT_FALSE(read_file(a / f).empty()) << f;
    EXPECT_EQ(read_file(a / f), read_file(b / f)) << f;
  }
  EXPECT_EQ(la.str(), lb.str());
  const auto m = nlohmann::json::parse(read_file(a / "manifest.json"));
  for (const char* k : {"L_psi", "rho", "L_composite", "ball_radius", "sigma", "L_g", "L_R"})
    EXPECT_TRUE(m["constants"].contains(k)) << k;
  EXPECT_EQ(m["tool"], "iprox");
  EXPECT_TRUE(m.contains("version"));
}

TEST(Commands, WriteAtomicReplaces) {
  const fs::path d = scratch("atomic");
  write_atomic((d / "x.txt").string(), "one");
  write_atomic((d / "x.txt").string(), "two");
  EXPECT_EQ(read_file(d / "x.txt"), "two");
  EXPECT_FALSE(fs::exists(d / "x.txt.tmp"));
}
