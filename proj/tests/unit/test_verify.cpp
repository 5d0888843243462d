#include <algorithm>
#include <set>

#include <gtest/gtest.h>

#include "iprox/errors.hpp"
#include "iprox/verify.hpp"

using namespace iprox;

TEST(Registry, CountsAndFilters) {
  const auto& reg = registry();
  auto count = [&](std::string_view f) {
    return std::count_if(reg.begin(), reg.end(),
                         [&](const CheckEntry& e) { return filter_matches(f, e.id); });
  };
  EXPECT_GE(count("table1"), 18);
  EXPECT_EQ(count("appendix"), 6);
  EXPECT_EQ(count("all"), static_cast<long>(reg.size()));
  EXPECT_EQ(count(""), static_cast<long>(reg.size()));
  EXPECT_TRUE(run_all("no-such-check").empty());
}

TEST(Registry, CoversManifest) {
  std::set<std::string> covered;
  std::set<std::string> ids;
  for (const CheckEntry& e : registry()) {
    covered.insert(e.property);
    EXPECT_TRUE(ids.insert(e.id).second) << "duplicate id " << e.id;
  }
  const auto& m = property_manifest();
  for (const std::string& p : m) EXPECT_TRUE(covered.count(p)) << p;
  for (const std::string& p : covered) {
    EXPECT_NE(std::find(m.begin(), m.end(), p), m.end()) << "unlisted property " << p;
  }
}

TEST(RunAll, DeterministicAndSorted) {
  const auto a = run_all("appendix", 3, 2);
  const auto b = run_all("appendix", 3, 1);
  ASSERT_EQ(a.size(), 6u);
  EXPECT_TRUE(std::is_sorted(a.begin(), a.end(),
                             [](const auto& x, const auto& y) { return x.id < y.id; }));
  EXPECT_EQ(report_json(a, "appendix", 3).dump(), report_json(b, "appendix", 3).dump());
}

TEST(Checks, BoundRows) {
  EXPECT_EQ(check_table1(Penalty::sq_l2(2, 1.0), ApproxKind::a, 0.1, 200, 0).status,
            CheckStatus::pass);
  const CheckRecord e = check_table1(Penalty::sq_l2(2, 1.0), ApproxKind::e, 0.1, 200, 0);
  EXPECT_EQ(e.status, CheckStatus::pass);
  const CheckRecord c = check_table1(Penalty::l1(1, 1.0), ApproxKind::c, 0.05, 200, 0);
  EXPECT_EQ(c.status, CheckStatus::pass);
}

TEST(Checks, LowerBound) {
  // Frozen from tests/oracle/derive.py.
  const CheckRecord r = check_lower_bound(1.0, 0.5, 0.1);
  EXPECT_EQ(r.status, CheckStatus::pass);
  ASSERT_FALSE(r.measured.empty());
  EXPECT_NEAR(r.measured[0], 0.0025, 1e-15);
  EXPECT_NEAR(r.bound[0], 0.00125, 1e-15);
  EXPECT_EQ(check_lower_bound(1.0, 1.0, 0.1).status, CheckStatus::pass);
  EXPECT_EQ(check_landau_kolmogorov(Penalty::sq_l2(1, 1.0), 8.0, 1.0).status, CheckStatus::pass);
}

TEST(Checks, AppendixExamples) {
  const CheckRecord a = check_appendix_fixed_points("l2:a", 0.5, 1.0);
  EXPECT_EQ(a.status, CheckStatus::pass);
  const auto fp = a.config["analytic"].get<std::vector<double>>();
  EXPECT_NEAR(fp[0], 0.3, 1e-15);
  EXPECT_NEAR(fp[1], 0.4, 1e-15);
  const CheckRecord b = check_appendix_fixed_points("l2:b", 1.5, 1.0);
  EXPECT_EQ(b.status, CheckStatus::pass);
  EXPECT_TRUE(b.config["analytic"].is_null());
  EXPECT_EQ(check_appendix_fixed_points("l2:d", 0.5, 1.0).status, CheckStatus::pass);
  EXPECT_THROW(check_appendix_fixed_points("l3:a", 0.5, 1.0), ConstraintError);
}

TEST(Checks, Transfer) {
  for (const Penalty& p : {Penalty::l1(1, 1.0), Penalty::l2(2, 2.0), Penalty::sq_l2(2, 1.0)}) {
    EXPECT_EQ(check_prox_transfer(p, 100, 0).status, CheckStatus::pass) << p.name();
  }
}

TEST(Surface, MonotoneAlongRatio) {
  const SurfaceGrid g = contractivity_surface(SurfaceSpec{});
  for (const auto& [a, v] : g.values) {
    for (Eigen::Index i = 0; i < v.rows(); ++i) {
      for (Eigen::Index j = 1; j < v.cols(); ++j) {
        if (v(i, j - 1) < 1.0) EXPECT_LT(v(i, j), 1.0) << to_string(a) << " " << i << "," << j;
      }
    }
  }
  // L_g = 1 (first rows cover it): FB contracts for every ratio < 1.
  const auto it = std::lower_bound(g.L_g.begin(), g.L_g.end(), 1.0);
  const auto row = it - g.L_g.begin();
  for (Eigen::Index j = 0; j < g.values.at(Algorithm::fb).cols(); ++j) {
    if (g.ratio[j] < 1.0) EXPECT_LT(g.values.at(Algorithm::fb)(row, j), 1.0);
  }
  EXPECT_EQ(check_surface(SurfaceSpec{}).status, CheckStatus::pass);
}

TEST(Convergence, Experiments) {
  EXPECT_EQ(convergence_ball_experiment(Algorithm::ppa, Order::g_first, ApproxKind::a,
                                        Schedule::constant(0.1), 0, 300)
                .status,
            CheckStatus::pass);
  EXPECT_EQ(convergence_ball_experiment(Algorithm::fb, Order::g_first, ApproxKind::b,
                                        Schedule::geometric(0.1, 0.9), 0, 2000)
                .status,
            CheckStatus::pass);
  EXPECT_EQ(convergence_ball_experiment(Algorithm::dr, Order::f_first, ApproxKind::e,
                                        Schedule::constant(0.1), 0, 300)
                .status,
            CheckStatus::pass);
}
