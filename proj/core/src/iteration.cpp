#include "iprox/iteration.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <string>

#include "iprox/errors.hpp"

namespace iprox {

double Trace::window_max_dist(double fraction) const {
  if (dist.empty()) return 0.0;
  const auto n = dist.size();
  const auto w = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(fraction * n)));
  return *std::max_element(dist.end() - static_cast<std::ptrdiff_t>(std::min(w, n)), dist.end());
}

namespace {

void guard(const Vec& x, int k) {
  if (!x.allFinite())
    throw DivergenceError("non-finite iterate at k=" + std::to_string(k));
  if (x.norm() > kDivergenceGuard)
    throw DivergenceError("iterate norm exceeded 1e9 at k=" + std::to_string(k));
}

}  // namespace

Trace iterate(const StepFamily& steps, const Vec& x0, int K, const std::optional<Vec>& target) {
  require(K >= 0, "iteration count must be >= 0");
  if (target) require_dim(target->size(), x0.size(), "iterate target");
  guard(x0, 0);
  Trace t;
  t.iterates.reserve(static_cast<std::size_t>(K) + 1);
  t.iterates.push_back(x0);
  if (target) {
    t.dist.push_back((x0 - *target).norm());
    t.envelope.push_back(t.dist.back());
  }
  Vec x = x0;
  for (int k = 0; k < K; ++k) {
    const Step s = steps(k);
    const Evaluation ev = s.apply(x);
    require_dim(ev.point.size(), x.size(), "iterate step");
    guard(ev.point, k + 1);
    t.residual.push_back((ev.point - x).norm());
    t.eps.push_back(s.eps);
    t.mc_slack.push_back(3.0 * ev.stderr_norm);
    x = ev.point;
    t.iterates.push_back(x);
    if (target) {
      t.dist.push_back((x - *target).norm());
      t.envelope.push_back(s.L * t.envelope.back() +
                           s.multiplier * (s.gamma + s.sigma + t.mc_slack.back()));
    }
  }
  return t;
}

Trace proximal_point_run(const ApproxFactory& make_g, const Schedule& schedule, const Vec& x0,
                         int K, const std::optional<Vec>& target) {
  schedule.validate();
  StepFamily steps = [&](int k) {
    auto g = std::make_shared<ApproxOperator>(make_g(schedule.eps(k)));
    const LipschitzPair lp = g->lipschitz();
    Step s;
    s.apply = [g](const Vec& x) { return g->evaluate_full(x); };
    s.sigma = g->sigma();
    s.gamma = std::max(lp.gamma, schedule.gamma(k));
    s.eps = schedule.eps(k);
    s.L = lp.L;
    return s;
  };
  return iterate(steps, x0, K, target);
}

Operator make_splitting_operator(const SplittingProblem& prob, VecMap g) {
  switch (prob.algorithm) {
    case Algorithm::ppa: return Operator(std::move(g));
    case Algorithm::fb: return fb_operator(std::move(g), prob.f, prob.tau);
    case Algorithm::pr: return pr_operator(std::move(g), prob.f, prob.tau, prob.order);
    case Algorithm::dr: return dr_operator(std::move(g), prob.f, prob.tau, prob.order);
  }
  return Operator(std::move(g));
}

double composite_factor(const SplittingProblem& prob, double L_g) {
  return contraction_factor(prob.algorithm, L_g, prob.f.mu, prob.f.L_f, prob.tau);
}

Trace run_splitting(const SplittingProblem& prob, const ApproxFactory& make_g,
                    const Schedule& schedule, const Vec& x0, int K,
                    const std::optional<Vec>& target) {
  schedule.validate();
  require(prob.tau > 0, "step size must be positive");
  const double L_R = reflected_resolvent_factor(prob.f.mu, prob.f.L_f, prob.tau);
  const double m = error_multiplier(prob.algorithm, prob.order, L_R);
  StepFamily steps = [&](int k) {
    auto g = std::make_shared<ApproxOperator>(make_g(schedule.eps(k)));
    // Largest Monte-Carlo error among the g calls of the current step.
    auto mc = std::make_shared<double>(0.0);
    Operator T = make_splitting_operator(prob, [g, mc](const Vec& x) {
      Evaluation ev = g->evaluate_full(x);
      *mc = std::max(*mc, ev.stderr_norm);
      return ev.point;
    });
    const LipschitzPair lp = g->lipschitz();
    Step s;
    s.apply = [T, mc](const Vec& x) {
      *mc = 0.0;
      Evaluation ev;
      ev.point = T(x);
      ev.stderr_norm = *mc;
      return ev;
    };
    s.sigma = g->sigma();
    s.gamma = std::max(lp.gamma, schedule.gamma(k));
    s.eps = schedule.eps(k);
    s.L = composite_factor(prob, lp.L);
    s.multiplier = m;
    return s;
  };
  return iterate(steps, x0, K, target);
}

Vec reference_fixed_point(const SplittingProblem& prob, const Penalty& p, double lambda,
                          const Vec& x0, int max_iter, double tol) {
  VecMap g = [p, lambda](const Vec& y) { return prox_exact(p, lambda, y); };
  // PR shares its fixed points with the averaged DR map of the same order,
  // which converges under weaker conditions.
  SplittingProblem ref = prob;
  if (ref.algorithm == Algorithm::pr) ref.algorithm = Algorithm::dr;
  Operator T = make_splitting_operator(ref, g);
  Vec x = x0;
  for (int i = 0; i < max_iter; ++i) {
    Vec next = T(x);
    const double r = (next - x).norm();
    x = std::move(next);
    if (!x.allFinite()) throw DivergenceError("reference run diverged");
    if (r <= tol) return x;
  }
  throw NoContraction("reference run did not reach tolerance within " +
                      std::to_string(max_iter) + " iterations");
}

}  // namespace iprox
