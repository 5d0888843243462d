#include <cmath>

#include <gtest/gtest.h>

#include "iprox/approximators.hpp"
#include "iprox/errors.hpp"
#include "iprox/fixed_point.hpp"
#include "iprox/grid_oracle.hpp"
#include "iprox/rng.hpp"

using namespace iprox;

namespace {

Vec v1(double a) { return (Vec(1) << a).finished(); }
Vec v2(double a, double b) { return (Vec(2) << a, b).finished(); }

VecMap as_map(const ApproxOperator& g) {
  return [g](const Vec& x) { return g.evaluate(x); };
}

}  // namespace

TEST(TypeA, ZeroEpsIsExact) {
  const Penalty p = Penalty::l1(2, 1.0);
  const ApproxOperator g = make_type_a(p, 1.0, 0.0, Policy::adversarial());
  for (const Vec& x : box_cloud(1, 2, 30, 5.0)) EXPECT_EQ(g.evaluate(x), prox_exact(p, 1.0, x));
}

TEST(TypeA, ConstantPenaltyHasNoFixedPoint) {
  const Vec e = v2(0.06, -0.08);
  const ApproxOperator g = make_type_a(Penalty::constant(2, 1.0), 1.0, 0.1, Policy::fixed(e));
  for (const Vec& x : box_cloud(2, 2, 30, 5.0)) EXPECT_NEAR((g.evaluate(x) - x).norm(), 0.1, 1e-15);
  EXPECT_TRUE(certify_no_fixed_point(as_map(g), 2, 0).no_fixed_point);
}

TEST(TypeA, QuadraticFixedPoint) {
  const double gamma = 0.5;
  const Vec e = v2(0.06, 0.08);
  const ApproxOperator g = make_type_a(Penalty::sq_l2(2, gamma), 1.0, e.norm(), Policy::fixed(e));
  const FixedPointResult r = fixed_point_solve(as_map(g), v2(4, -3));
  ASSERT_TRUE(r.converged);
  EXPECT_LT((r.x - (1 + gamma) / gamma * e).norm(), 1e-9);
}

TEST(TypeA, RejectsOversizedError) {
  EXPECT_THROW(make_type_a(Penalty::l1(2, 1.0), 1.0, 0.1, Policy::fixed(v2(0.1, 0.1))),
               ConstraintError);
}

TEST(TypeB, FixedPoints) {
  const Vec r = v2(0.3, -0.4);
  const ApproxOperator sq = make_type_b(Penalty::sq_l2(2, 2.0), 1.0, 0.5, Policy::fixed(r));
  EXPECT_LT((fixed_point_solve(as_map(sq), v2(1, 1)).x - r / 2.0).norm(), 1e-9);
  const ApproxOperator l2 = make_type_b(Penalty::l2(2, 1.0), 1.0, 0.5, Policy::fixed(r));
  const FixedPointResult fp = fixed_point_solve(as_map(l2), v2(2, 3));
  ASSERT_TRUE(fp.converged);
  EXPECT_LT(fp.x.norm(), 1e-9);
  EXPECT_EQ(make_type_b(Penalty::l1(2, 1.0), 1.0, 0.0, Policy::exact()).evaluate(v2(2, 0.5)),
            prox_exact(Penalty::l1(2, 1.0), 1.0, v2(2, 0.5)));
}

TEST(TypeC, ZeroEpsIsExact) {
  const Penalty p = Penalty::l2(2, 1.0);
  const ApproxOperator g = make_type_c(p, 1.0, 0.0, Policy::boundary());
  EXPECT_EQ(g.evaluate(v2(2, -1)), prox_exact(p, 1.0, v2(2, -1)));
}

TEST(TypeC, BoundaryOnQuadratic) {
  const Penalty p = Penalty::sq_l2(2, 1.0);
  const double eps = 0.1;
  const ApproxOperator g = make_type_c(p, 1.0, eps, Policy::boundary());
  for (const Vec& y : box_cloud(3, 2, 20, 4.0)) {
    const Vec z = g.evaluate(y);
    EXPECT_LE((z - prox_exact(p, 1.0, y)).norm(), std::sqrt(eps) + 1e-12);
    // The residual y - z sits on the boundary of the inclusion.
    EXPECT_NEAR(inclusion_gap(p, 1.0, z, y - z), eps, 1e-9);
    EXPECT_TRUE(check_inclusion_eps_rho(p, z, y - z, eps * (1 + 1e-6), 0.0).holds);
  }
}

TEST(TypeC, L1ValuesSatisfyInclusion) {
  const Penalty p = Penalty::l1(1, 1.0);
  const ApproxOperator g = make_type_c(p, 1.0, 0.1, Policy::boundary());
  for (double y : {-2.0, -0.5, 0.0, 0.3, 1.4}) {
    const Vec z = g.evaluate(v1(y));
    EXPECT_TRUE(check_inclusion_eps_rho(p, z, v1(y) - z, 0.1 + 1e-6, 0.0).holds) << y;
  }
}

TEST(TypeD, GaussianBumpFormula) {
  const double gamma = 0.5, eps = 0.1;
  const Vec e = eps * v2(0.6, 0.8);
  const ApproxOperator g = make_type_d(Penalty::sq_l2(2, gamma), 1.0, eps, Policy::gaussian_bump(e));
  for (const Vec& x : box_cloud(4, 2, 20, 3.0)) {
    const Vec want = x / (1 + gamma) - eps * (x - e) * std::exp(-0.5 * (x - e).squaredNorm());
    EXPECT_LT((g.evaluate(x) - want).norm(), 1e-15);
  }
  // Frozen from tests/oracle/derive.py (fsolve on g(y) = y).
  const FixedPointResult r = fixed_point_solve(as_map(g), v2(1, 1));
  ASSERT_TRUE(r.converged);
  EXPECT_NEAR(r.x[0], 0.013814624448243726, 1e-10);
  EXPECT_NEAR(r.x[1], 0.018419499264324974, 1e-10);
  // Of the form t e with t in (-1, 1).
  const double t = r.x.dot(e) / e.squaredNorm();
  EXPECT_LT((r.x - t * e).norm(), 1e-10);  // solver tolerance
  EXPECT_LT(std::abs(t), 1.0);
}

TEST(TypeD, ShrinkGap) {
  Policy pol = Policy::shrink(4.0);
  pol.box = 1.0;
  const ApproxOperator g = make_type_d(Penalty::sq_l2(1, 1.0), 1.0, 1.0 / 8.0, pol);
  EXPECT_DOUBLE_EQ(g.sup_gap_on_box(), 1.0 / 8.0);
  EXPECT_NEAR(g.psi_eps(v1(1.0)) - psi_potential(Penalty::sq_l2(1, 1.0), v1(1.0)), -1.0 / 8.0,
              1e-15);
}

TEST(TypeE, CenterAndSteiner) {
  const Penalty p = Penalty::sq_l2(2, 1.0);
  const ApproxOperator c = make_type_e(p, 1.0, 0.1, Policy::center());
  const ApproxOperator s = make_type_e(p, 1.0, 0.1, Policy::steiner());
  const Vec y = v2(1.5, -0.5);
  EXPECT_EQ(c.evaluate(y), prox_exact(p, 1.0, y));
  EXPECT_LT((s.evaluate(y) - prox_exact(p, 1.0, y)).norm(), 1e-15);
}

TEST(TypeE, BoundaryDistanceOnQuadratic) {
  // Radius of d_eps psi for sq_l2(1) at eps = 0.1, frozen from
  // tests/oracle/derive.py; equals sqrt(2 L_psi eps) with L_psi = 1/2.
  const Penalty p = Penalty::sq_l2(2, 1.0);
  const ApproxOperator g = make_type_e(p, 1.0, 0.1, Policy::boundary());
  for (const Vec& y : box_cloud(5, 2, 10, 4.0)) {
    EXPECT_NEAR((g.evaluate(y) - prox_exact(p, 1.0, y)).norm(), 0.31622776601683794, 1e-12);
  }
  const Vec y = v2(1, -2), u = v2(0.6, 0.8);
  EXPECT_NEAR(psi_eps_support(p, 1.0, 0.1, y, u) - prox_exact(p, 1.0, y).dot(u),
              0.31622776601683794, 1e-7);
}

TEST(Steiner, Shapes) {
  EXPECT_TRUE(steiner_point(ConvexSet::ball(v2(1, 2), 3.0)).isApprox(v2(1, 2)));
  EXPECT_TRUE(steiner_point(ConvexSet::segment(v2(0, 0), v2(2, 4))).isApprox(v2(1, 2)));
  const ConvexSet square = ConvexSet::from_support(
      2, [](const Vec& u) { return std::abs(u[0]) + std::abs(u[1]); });
  EXPECT_LT(steiner_point(square).norm(), 1e-6);
  // Frozen from tests/oracle/derive.py (quadrature of u sigma(u)).
  const ConvexSet box = ConvexSet::from_support(
      2, [](const Vec& u) { return std::max(0.0, u[0]) + 2 * std::max(0.0, u[1]); });
  EXPECT_LT((steiner_point(box) - v2(0.5, 1.0)).norm(), 1e-6);
}

TEST(Inclusion, Oracle) {
  const Penalty p = Penalty::l1(1, 1.0);
  const Vec y = v1(2.5);
  const Vec z = prox_exact(p, 1.0, y);
  EXPECT_TRUE(check_inclusion_eps_rho(p, z, y - z, 0.0, 0.0).holds);
  // 0 is no eps-subgradient at z = 1 when eps < phi(1) - min phi = 1.
  EXPECT_FALSE(check_inclusion_eps_rho(p, v1(1.0), v1(0.0), 0.5, 0.0).holds);
}

TEST(Bounds, Rows) {
  BoundConstants c;
  c.L_psi = 1.0;
  EXPECT_DOUBLE_EQ(sigma_bound(ApproxKind::a, 0.1, c), 0.1);
  EXPECT_DOUBLE_EQ(lipschitz_pair(ApproxKind::a, 0.1, c).L, 1.0);
  EXPECT_DOUBLE_EQ(lipschitz_pair(ApproxKind::a, 0.1, c).gamma, 0.2);
  BoundConstants f;
  f.N = 1;
  f.lambda = 0.5;
  f.rho = 0.0;
  EXPECT_DOUBLE_EQ(sigma_bound(ApproxKind::f, 0.01, f), std::sqrt(0.005));
  for (double rho : {0.0, 0.3}) {
    BoundConstants k;
    k.rho = rho;
    EXPECT_EQ(sigma_bound(ApproxKind::c, 0.0, k), 0.0);
    EXPECT_EQ(lipschitz_pair(ApproxKind::c, 0.0, k).gamma, 0.0);
  }
  EXPECT_THROW(sigma_bound(ApproxKind::b, 0.1, BoundConstants{}), std::invalid_argument);
}

TEST(Empirical, ExactAndTypeA) {
  const Penalty p = Penalty::l2(2, 1.0);
  const auto cloud = box_cloud(6, 2, 200, 5.0);
  const ApproxOperator exact = make_type_a(p, 1.0, 0.0, Policy::exact());
  EXPECT_EQ(empirical_sigma(exact, cloud), 0.0);
  const LipschitzPair lp = empirical_lipschitz(exact, cloud);
  EXPECT_LE(lp.L, 1.0 + 1e-12);
  EXPECT_EQ(lp.gamma, 0.0);
  const ApproxOperator a = make_type_a(p, 1.0, 0.1, Policy::random_sphere(), 9);
  EXPECT_LE(empirical_sigma(a, cloud), 0.1 + 1e-15);
  const ApproxOperator c = make_type_c(Penalty::sq_l2(2, 1.0), 1.0, 0.1, Policy::boundary());
  EXPECT_LE(empirical_sigma(c, cloud), std::sqrt(0.1) + 1e-12);
}

TEST(Hausdorff, Balls) {
  EXPECT_NEAR(hausdorff_ball_distance(ConvexSet::ball(v2(0, 0), 1), ConvexSet::ball(v2(3, 4), 1)),
              5.0, 1e-15);
  EXPECT_EQ(hausdorff_ball_distance(ConvexSet::ball(v2(1, 1), 2), ConvexSet::ball(v2(1, 1), 2)), 0.0);
  EXPECT_NEAR(hausdorff_ball_distance(ConvexSet::ball(v2(1, 1), 2), ConvexSet::ball(v2(1, 1), 2.5)),
              0.5, 1e-15);
}

TEST(Policies, RejectedCombinations) {
  const Penalty p = Penalty::l1(2, 1.0);
  EXPECT_THROW(make_type_d(p, 1.0, 0.1, Policy::adversarial()), ConstraintError);
  EXPECT_THROW(make_type_f(p, 1.0, 0.1, Policy::exact()), ConstraintError);
  EXPECT_THROW(make_type_a(p, 1.0, -0.1, Policy::exact()), ConstraintError);
  EXPECT_THROW(policy_kind_from_string("nope"), std::invalid_argument);
}
