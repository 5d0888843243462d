#include <cmath>

#include <gtest/gtest.h>

#include "iprox/errors.hpp"
#include "iprox/hjprox.hpp"
#include "iprox/rng.hpp"

using namespace iprox;

namespace {

Vec v1(double a) { return (Vec(1) << a).finished(); }

HJConfig config(double lambda, double eps, long samples, std::uint64_t seed = 1) {
  HJConfig c;
  c.lambda = lambda;
  c.eps = eps;
  c.samples = samples;
  c.seed = seed;
  return c;
}

}  // namespace

TEST(TypeF, ConstantPenaltyIsUniformMean) {
  const Penalty p = Penalty::constant(2, 3.0);
  const Vec x = (Vec(2) << 1.0, -2.0).finished();
  HJConfig direct = config(1.0, 0.1, 20000);
  direct.pilot_samples = 0;
  const HJEstimate est = type_f_prox(p, direct, x);
  EXPECT_LE((est.point - x).norm(), 3 * est.stderr_norm());
  EXPECT_NEAR(est.ess, 20000.0, 1e-6);
  // A re-centred proposal keeps the mean unbiased.
  const HJEstimate pilot = type_f_prox(p, config(1.0, 0.1, 20000), x);
  EXPECT_LE((pilot.point - x).norm(), 3 * pilot.stderr_norm());
}

TEST(TypeF, QuadraticAgainstGaussianIntegral) {
  // Posterior mean by quadrature, frozen from tests/oracle/derive.py.
  const HJEstimate est = type_f_prox(Penalty::sq_l2(1, 1.0), config(0.5, 0.01, 100000), v1(2.0));
  const double oracle = 1.3333333333333333;
  EXPECT_LE(std::abs(est.point[0] - oracle), std::sqrt(0.5 * 0.01) + 3 * est.stderr_norm());
}

TEST(TypeF, Deterministic) {
  const HJConfig c = config(1.0, 0.05, 30000, 42);
  const Penalty p = Penalty::l1(2, 1.0);
  const Vec x = (Vec(2) << 1.3, -0.2).finished();
  const HJEstimate a = type_f_prox(p, c, x);
  const HJEstimate b = type_f_prox(p, c, x);
  EXPECT_EQ(a.point, b.point);
  EXPECT_EQ(a.stderr_, b.stderr_);
  HJConfig threaded = c;
  threaded.jobs = 3;
  EXPECT_EQ(type_f_prox(p, threaded, x).point, a.point);
}

TEST(TypeF, SoftThresholdLimit) {
  // Shrinking eps drives the estimate to the soft-threshold value.
  const Penalty p = Penalty::l1(1, 1.0);
  const double target = 1.5;  // prox of 2.5 with lambda = 1
  for (double eps : {0.1, 0.01, 0.001}) {
    const HJEstimate est = type_f_prox(p, config(1.0, eps, 50000), v1(2.5));
    EXPECT_LE(std::abs(est.point[0] - target), std::sqrt(eps) + 3 * est.stderr_norm()) << eps;
  }
}

TEST(ViscousEnvelope, ConstantAndQuadratic) {
  HJConfig c = config(1.0, 0.1, 5000);
  c.pilot_samples = 0;
  EXPECT_NEAR(viscous_envelope_value(Penalty::constant(1, 2.5), c, v1(0.7)).value, 2.5, 1e-12);
  // Frozen from tests/oracle/derive.py: -eps log of the Gaussian normalizer.
  const EnvelopeEstimate e =
      viscous_envelope_value(Penalty::sq_l2(1, 1.0), config(0.5, 0.01, 100000), v1(2.0));
  EXPECT_LE(std::abs(e.value - 1.3353606588738738), 3 * e.stderr_ + 1e-12);
}

TEST(ViscousEnvelope, CloseToMoreauOnL1) {
  const Penalty p = Penalty::l1(1, 1.0);
  for (double x : {-2.0, -0.3, 0.0, 0.8, 3.0}) {
    const EnvelopeEstimate e = viscous_envelope_value(p, config(1.0, 0.01, 50000), v1(x));
    // |u - u^eps| <= C sqrt(eps); C = 1 is generous for this penalty.
    EXPECT_LE(std::abs(e.value - moreau_envelope(p, 1.0, v1(x))), std::sqrt(0.01)) << x;
  }
}

TEST(SigmaF, QuadraticAndMcp) {
  const auto cloud2 = box_cloud(3, 2, 10, 4.0);
  const SigmaFReport sq = sigma_f_check(Penalty::sq_l2(2, 1.0), config(1.0, 0.01, 20000), cloud2);
  EXPECT_TRUE(sq.pass);
  EXPECT_NEAR(sq.bound, std::sqrt(2 * 0.01), 1e-15);
  const Penalty m = Penalty::mcp(1, 1.0, 2.0);
  const SigmaFReport mr = sigma_f_check(m, config(1.0, 0.01, 20000), box_cloud(4, 1, 10, 4.0));
  EXPECT_TRUE(mr.pass);
  EXPECT_THROW(sigma_f_check(m, config(2.5, 0.01, 100), box_cloud(4, 1, 2, 4.0)), ConstraintError);
}

TEST(SigmaF, GapShrinksWithEps) {
  const Penalty p = Penalty::l2(2, 1.0);
  const auto cloud = box_cloud(5, 2, 8, 4.0);
  const double big = sigma_f_check(p, config(1.0, 0.1, 20000), cloud).max_gap;
  const double small = sigma_f_check(p, config(1.0, 0.001, 20000), cloud).max_gap;
  EXPECT_LT(small, big);
}
