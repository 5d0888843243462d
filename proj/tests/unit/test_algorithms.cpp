#include <cmath>

#include <gtest/gtest.h>

#include "iprox/errors.hpp"
#include "iprox/fixed_point.hpp"
#include "iprox/iteration.hpp"
#include "iprox/km.hpp"
#include "iprox/rng.hpp"

using namespace iprox;

namespace {

Vec v1(double a) { return (Vec(1) << a).finished(); }
Vec v2(double a, double b) { return (Vec(2) << a, b).finished(); }

// f = 1/2 (x1 - 1.5)^2 + (x2 + 1)^2, phi = ||x||_1.
SplittingProblem problem(Algorithm a, Order o = Order::g_first) {
  SplittingProblem prob;
  prob.algorithm = a;
  prob.order = o;
  prob.f = SmoothTerm::diagonal_quadratic(1.0, 2.0, v2(1.5, -1.0));
  prob.tau = optimal_tau(a, 1.0, 2.0);
  return prob;
}

VecMap exact_l1(double lambda) {
  const Penalty p = Penalty::l1(2, 1.0);
  return [p, lambda](const Vec& y) { return prox_exact(p, lambda, y); };
}

}  // namespace

TEST(ProximalPoint, ExactRate) {
  // sq_l2 with mu = 1: every step multiplies the distance by 1/2.
  const Penalty p = Penalty::sq_l2(1, 1.0);
  const ApproxFactory make = [&](double eps) {
    return make_type_a(p, 1.0, eps, Policy::exact());
  };
  const Trace t = proximal_point_run(make, Schedule::constant(0.0), v1(8.0), 20, Vec::Zero(1));
  for (std::size_t k = 1; k < t.size(); ++k) EXPECT_NEAR(t.dist[k], t.dist[k - 1] / 2, 1e-15);
}

TEST(ProximalPoint, ConstantScheduleBall) {
  const Penalty p = Penalty::sq_l2(1, 1.0);
  const ApproxFactory make = [&](double eps) {
    return make_type_a(p, 1.0, eps, Policy::adversarial());
  };
  const Trace t = proximal_point_run(make, Schedule::constant(0.1), v1(8.0), 200, Vec::Zero(1));
  // (gamma + sigma)/(1 - L) = (0.2 + 0.1)/(1 - 0.5).
  EXPECT_LE(t.window_max_dist(0.2), 0.6 + 1e-12);
  for (std::size_t k = 0; k < t.size(); ++k) EXPECT_LE(t.dist[k], t.envelope[k] + 1e-12);
}

TEST(ProximalPoint, GeometricScheduleConverges) {
  const Penalty p = Penalty::sq_l2(1, 1.0);
  const ApproxFactory make = [&](double eps) {
    return make_type_a(p, 1.0, eps, Policy::adversarial());
  };
  const Trace t = proximal_point_run(make, Schedule::geometric(0.1, 0.9), v1(8.0), 400, Vec::Zero(1));
  EXPECT_LT(t.dist.back(), 1e-6);
}

TEST(KM, Parameters) {
  EXPECT_TRUE(validate_km_params(KMParams::constant(50, 0.0, 0.0, 0.5), 50).valid);
  EXPECT_FALSE(validate_km_params(KMParams::constant(50, 0.0, 0.0, 1.0), 50).valid);
  // Frozen from tests/oracle/derive.py.
  const KMReport r = validate_km_params(KMParams::constant(50, 0.3, 0.3, 0.5), 50);
  EXPECT_NEAR(r.compatibility, -0.1, 1e-15);
  EXPECT_NEAR(r.mu_sup, 0.3, 1e-15);
}

TEST(KM, ExactProxConverges) {
  const VecMap T = exact_l1(1.0);
  const Trace t = km_run(T, KMParams::constant(300, 0.0, 0.0, 0.5), v2(3.0, -2.0), 300);
  EXPECT_LT((T(t.iterates.back()) - t.iterates.back()).norm(), 1e-12);
}

TEST(KM, SummableErrorsOnShrinkFamily) {
  const ApproxOperator g = make_type_d(Penalty::l1(2, 1.0), 1.0, 0.5, Policy::shrink());
  KMParams p = KMParams::constant(2000, 0.1, 0.1, 0.5);
  p.theta_k = [](int k) { return Vec::Constant(2, 0.1 / (static_cast<double>(k) * k)); };
  const VecMap T = [g](const Vec& x) { return g.evaluate(x); };
  const Trace t = km_run(T, p, v2(3.0, -2.0), 2000);
  EXPECT_LT(t.residual.back(), 1e-6);
  EXPECT_THROW(km_run(T, KMParams::constant(10, 0.9, 0.9, 0.99), v2(1, 1), 10), ConstraintError);
}

TEST(Splitting, ReferenceMinimizer) {
  // Frozen from tests/oracle/derive.py (Nelder-Mead on f + phi).
  const SplittingProblem fb = problem(Algorithm::fb);
  const Vec xs = reference_fixed_point(fb, Penalty::l1(2, 1.0), fb.tau, v2(3, -2));
  EXPECT_LT((xs - v2(0.5, -0.5)).norm(), 1e-10);
  const Operator T = fb_operator(exact_l1(fb.tau), fb.f, fb.tau);
  EXPECT_LT((T(xs) - xs).norm(), 1e-10);
}

TEST(Splitting, DouglasRachfordIsAveragedPeacemanRachford) {
  for (Order o : {Order::g_first, Order::f_first}) {
    const SplittingProblem prob = problem(Algorithm::dr, o);
    const Operator pr = pr_operator(exact_l1(prob.tau), prob.f, prob.tau, o);
    const Operator dr = dr_operator(exact_l1(prob.tau), prob.f, prob.tau, o);
    for (const Vec& x : box_cloud(8, 2, 20, 4.0)) EXPECT_EQ(dr(x), Vec((x + pr(x)) / 2.0));
  }
}

TEST(Splitting, OrderMatters) {
  const SplittingProblem prob = problem(Algorithm::pr);
  const ApproxOperator g =
      make_type_a(Penalty::l1(2, 1.0), prob.tau, 0.1, Policy::fixed(v2(0.06, 0.08)));
  const VecMap gm = [g](const Vec& x) { return g.evaluate(x); };
  const Vec x = v2(0.4, 2.2);
  const Vec a = pr_operator(gm, prob.f, prob.tau, Order::g_first)(x);
  const Vec b = pr_operator(gm, prob.f, prob.tau, Order::f_first)(x);
  EXPECT_GT((a - b).norm(), 1e-3);
}

TEST(Contraction, Factors) {
  // Frozen from tests/oracle/derive.py.
  const double tau = optimal_tau(Algorithm::fb, 1.0, 2.0);
  EXPECT_NEAR(contraction_factor(Algorithm::fb, 1.0, 1.0, 2.0, tau), 1.0 / 3.0, 1e-15);
  EXPECT_EQ(contraction_factor(Algorithm::fb, 7.0, 2.0, 2.0, 0.5), 0.0);
  const double tr = optimal_tau(Algorithm::dr, 1.0, 2.0);
  const double L_R = reflected_resolvent_factor(1.0, 2.0, tr);
  EXPECT_NEAR(L_R, 0.17157287525380996, 1e-15);
  EXPECT_NEAR(contraction_factor(Algorithm::pr, 1.0, 1.0, 2.0, tr), 3 * L_R, 1e-15);
  EXPECT_NEAR(contraction_factor(Algorithm::dr, 1.0, 1.0, 2.0, tr), 1.5 * L_R + 0.5, 1e-15);
  // L_g = 10 with mu/L_f near 1 contracts under FB.
  EXPECT_LT(contraction_factor(Algorithm::fb, 10.0, 0.99, 1.0, optimal_tau(Algorithm::fb, 0.99, 1.0)),
            1.0);
}

TEST(Contraction, BallRadius) {
  EXPECT_DOUBLE_EQ(ball_radius(Algorithm::fb, Order::g_first, 0.5, 0.1, 0.2, 0.3), 0.6);
  EXPECT_DOUBLE_EQ(ball_radius(Algorithm::pr, Order::g_first, 0.5, 0.1, 0.2, 0.3), 1.2);
  EXPECT_EQ(ball_radius(Algorithm::dr, Order::f_first, 0.5, 0.0, 0.0, 0.3), 0.0);
}

TEST(FixedPoint, SolveAndCertify) {
  const Penalty sq = Penalty::sq_l2(2, 1.0);
  const Vec e = v2(0.03, 0.04);
  const ApproxOperator a = make_type_a(sq, 1.0, 0.05, Policy::fixed(e));
  const FixedPointResult r = fixed_point_solve([a](const Vec& x) { return a.evaluate(x); }, v2(5, 5));
  ASSERT_TRUE(r.converged);
  EXPECT_LT((r.x - 2.0 * e).norm(), 1e-9);
  const ApproxOperator c = make_type_a(Penalty::constant(2, 0.0), 1.0, 0.05, Policy::fixed(e));
  const NonexistenceCertificate cert =
      certify_no_fixed_point([c](const Vec& x) { return c.evaluate(x); }, 2, 0);
  EXPECT_TRUE(cert.no_fixed_point);
  EXPECT_EQ(cert.failed_starts, 8);
  const ApproxOperator b = make_type_b(Penalty::l2(2, 1.0), 1.0, 0.5, Policy::fixed(v2(0.3, 0.4)));
  EXPECT_LT(fixed_point_solve([b](const Vec& x) { return b.evaluate(x); }, v2(2, 1)).x.norm(), 1e-9);
}

TEST(FixedPoint, SpectralRadius) {
  const VecMap prox = [](const Vec& y) { return prox_exact(Penalty::sq_l2(2, 3.0), 1.0, y); };
  EXPECT_NEAR(spectral_radius_at(prox, v2(1, 2)), 0.25, 1e-8);
  EXPECT_NEAR(spectral_radius_at([](const Vec& y) { return y; }, v2(1, 2)), 1.0, 1e-8);
  const Vec e = 0.1 * v2(0.6, 0.8);
  const ApproxOperator d = make_type_d(Penalty::sq_l2(2, 0.5), 1.0, 0.1, Policy::gaussian_bump(e));
  const VecMap dm = [d](const Vec& x) { return d.evaluate(x); };
  const FixedPointResult r = fixed_point_solve(dm, v2(1, 1));
  EXPECT_LT(spectral_radius_at(dm, r.x), 1.0);
}

TEST(Iteration, DivergenceGuard) {
  const StepFamily grow = [](int) {
    Step s;
    s.apply = [](const Vec& x) { return Evaluation{Vec(10.0 * x), 0.0, 0.0}; };
    return s;
  };
  EXPECT_THROW(iterate(grow, v1(1.0), 20, std::nullopt), DivergenceError);
}
