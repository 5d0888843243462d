#include <cmath>

#include <gtest/gtest.h>

#include "iprox/errors.hpp"
#include "iprox/grid_oracle.hpp"
#include "iprox/penalty.hpp"
#include "iprox/rng.hpp"

using namespace iprox;

namespace {

Vec v1(double a) { return (Vec(1) << a).finished(); }
Vec v2(double a, double b) { return (Vec(2) << a, b).finished(); }

}  // namespace

TEST(Penalty, EvalBasics) {
  EXPECT_EQ(eval(Penalty::sq_l2(2, 1.0), Vec::Zero(2)), 0.0);
  EXPECT_DOUBLE_EQ(eval(Penalty::l2(2, 1.0), v2(3, 4)), 5.0);
  EXPECT_EQ(eval(Penalty::mcp(1, 1.0, 2.0), v1(0)), 0.0);
  EXPECT_THROW(eval(Penalty::l2(2, 1.0), v1(1)), DimensionMismatch);
}

TEST(Penalty, ProxClosedForms) {
  // Frozen from tests/oracle/derive.py (Nelder-Mead on the prox objective).
  const Vec p = prox_exact(Penalty::l2(2, 1.0), 1.0, v2(3, 4));
  EXPECT_NEAR(p[0], 2.4, 1e-8);
  EXPECT_NEAR(p[1], 3.2, 1e-8);
  const Vec y = v2(0.7, -1.3);
  EXPECT_TRUE(prox_exact(Penalty::sq_l2(2, 3.0), 1.0, y).isApprox(y / 4.0, 1e-15));
  EXPECT_EQ(prox_exact(Penalty::constant(2, 5.0), 1.0, y), y);
}

TEST(Penalty, MoreauEnvelope) {
  // Frozen from tests/oracle/derive.py.
  EXPECT_NEAR(moreau_envelope(Penalty::sq_l2(1, 1.0), 1.0, v1(2)), 1.0, 1e-12);
  EXPECT_NEAR(moreau_envelope(Penalty::l1(1, 1.0), 1.0, v1(0.5)), 0.125, 1e-12);
  // At a minimizer the infimum is attained at x = y.
  const Penalty p = Penalty::mcp(2, 1.0, 2.0);
  EXPECT_NEAR(moreau_envelope(p, 0.5, Vec::Zero(2)), 0.0, 1e-15);
}

TEST(Penalty, PotentialQuadratic) {
  // psi = ||y||^2/2 - u, frozen value from tests/oracle/derive.py.
  EXPECT_NEAR(psi_potential(Penalty::sq_l2(1, 1.0), v1(2)), 1.0, 1e-12);
  // l2: constant inside the gamma ball.
  const Penalty l2 = Penalty::l2(2, 2.0);
  EXPECT_NEAR(psi_potential(l2, v2(0.3, 0.4)), psi_potential(l2, v2(-1.0, 1.2)), 1e-14);
}

TEST(Penalty, PotentialGradientIsProx) {
  const double h = 1e-6;
  for (const Penalty& p : {Penalty::sq_l2(2, 2.0), Penalty::l2(2, 1.0), Penalty::l1(2, 1.0),
                           Penalty::mcp(2, 1.0, 2.0)}) {
    for (const Vec& y : box_cloud(7, 2, 20, 4.0)) {
      Vec g(2);
      for (int i = 0; i < 2; ++i) {
        Vec a = y, b = y;
        a[i] += h;
        b[i] -= h;
        g[i] = (psi_potential(p, a) - psi_potential(p, b)) / (2 * h);
      }
      EXPECT_LT((g - prox_exact(p, 1.0, y)).norm(), 1e-5) << p.name();
    }
  }
}

TEST(Penalty, ProxMatchesGridOracle) {
  for (const Penalty& p : {Penalty::l1(1, 1.0), Penalty::mcp(1, 1.0, 2.0), Penalty::l2(1, 0.5)}) {
    for (double y : {-3.1, -0.4, 0.2, 1.7, 2.9}) {
      EXPECT_NEAR(prox_exact(p, 0.8, v1(y))[0], grid_prox(p, 0.8, v1(y))[0], 1e-5) << p.name();
    }
  }
}

TEST(Penalty, EpsSubdifferential) {
  // sq_l2(g): ball centred at g x with radius sqrt(2 g eps).
  const Penalty sq = Penalty::sq_l2(2, 2.0);
  const ConvexSet s = eps_subdifferential(sq, 0.1, v2(1, -1));
  ASSERT_TRUE(s.is_ball());
  const auto& b = std::get<Ball>(s.shape());
  EXPECT_TRUE(b.center.isApprox(v2(2, -2)));
  EXPECT_NEAR(b.radius, std::sqrt(0.4), 1e-15);
  // l2 at the origin: the unit ball for every eps.
  const ConvexSet u = eps_subdifferential(Penalty::l2(2, 1.0), 3.0, Vec::Zero(2));
  EXPECT_TRUE(u.contains(v2(0.6, 0.8), 1e-12));
  EXPECT_FALSE(u.contains(v2(0.6, 0.81), 1e-12));
  // l1 at 2 with eps = 0 is {1}.
  const ConvexSet one = eps_subdifferential(Penalty::l1(1, 1.0), 0.0, v1(2));
  EXPECT_TRUE(one.contains(v1(1.0), 1e-12));
  EXPECT_FALSE(one.contains(v1(0.999), 1e-12));
}

TEST(Penalty, ScalingTransfer) {
  // Frozen: lhs from tests/oracle/derive.py.
  const TransferPair a = prox_scaling_transfer(Penalty::l1(1, 1.0), 1.0, 0.5, v1(3));
  EXPECT_NEAR(a.lhs[0], 1.0, 1e-12);
  EXPECT_NEAR((a.lhs - a.rhs).norm(), 0.0, 1e-12);
  const TransferPair b = prox_scaling_transfer(Penalty::l2(2, 1.0), 2.0, 0.25, v2(1, 1));
  EXPECT_LT((b.lhs - b.rhs).norm(), 1e-10);
  EXPECT_LT(b.lhs.norm(), 1e-12);
}

TEST(Penalty, TransferMcpAgainstGrid) {
  const Penalty p = Penalty::mcp(1, 1.0, 2.0);
  const double alpha = p.rho() / 2.0;
  const TransferPair t = prox_scaling_transfer(p, 1.0, alpha, v1(1.0));
  const Vec lhs_grid = grid_prox(p.with_quadratic(alpha), 1.0, v1(1.0));
  const Vec rhs_grid = grid_prox(p, 1.0 / (2 * alpha + 1), v1(1.0 / (2 * alpha + 1)));
  EXPECT_NEAR(t.lhs[0], lhs_grid[0], 1e-5);
  EXPECT_NEAR(t.rhs[0], rhs_grid[0], 1e-5);
}

TEST(Penalty, WeakSplit) {
  const WeakSplit c = weakly_convex_split(Penalty::l1(2, 1.0), 0.5);
  EXPECT_EQ(c.rho, 0.0);
  EXPECT_EQ(c.smooth_grad(v2(1, 2)), Vec::Zero(2));
  EXPECT_EQ(c.convex_part, Penalty::l1(2, 1.0));

  const Penalty m = Penalty::mcp(1, 1.0, 2.0);
  const WeakSplit w = weakly_convex_split(m, 0.5 / m.rho());
  EXPECT_EQ(w.convex_part.rho(), 0.0);
  // Sampled midpoint convexity of the convex part.
  Rng rng(3);
  std::uniform_real_distribution<double> u(-4, 4);
  for (int i = 0; i < 500; ++i) {
    const Vec a = v1(u(rng)), b = v1(u(rng));
    EXPECT_LE(eval(w.convex_part, (a + b) / 2),
              (eval(w.convex_part, a) + eval(w.convex_part, b)) / 2 + 1e-12);
  }
  const Vec x0 = v1(1.5);
  EXPECT_LT(eval(m, w.step(x0)), eval(m, x0));
}

TEST(Penalty, RejectsBadParameters) {
  EXPECT_THROW(Penalty::l1(2, -1.0), ConstraintError);
  EXPECT_THROW(prox_exact(Penalty::sq_l2(1, 1.0), 0.0, v1(1)), ConstraintError);
  // MCP prox is single valued only for lambda < b.
  EXPECT_THROW(prox_exact(Penalty::mcp(1, 1.0, 2.0), 3.0, v1(1)), ConstraintError);
}
