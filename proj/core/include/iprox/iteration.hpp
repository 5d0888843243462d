#pragma once

#include <optional>
#include <string>
#include <vector>

#include "iprox/approximators.hpp"
#include "iprox/schedule.hpp"
#include "iprox/splitting.hpp"

namespace iprox {

struct Trace {
  std::vector<Vec> iterates;
  /// ||x_k - x*||, empty when no target is known.
  std::vector<double> dist;
  /// ||x_{k+1} - x_k||, one shorter than iterates.
  std::vector<double> residual;
  /// Proof recursion E_{k+1} = L E_k + m (gamma_k + sigma_k) (+ MC slack).
  std::vector<double> envelope;
  std::vector<double> eps;
  /// 3 * Monte-Carlo standard error of each step (zero when deterministic).
  std::vector<double> mc_slack;

  std::size_t size() const { return iterates.size(); }
  /// max of dist over the trailing fraction of the run.
  double window_max_dist(double fraction) const;
};

/// One iteration's map with the constants entering the envelope.
struct Step {
  std::function<Evaluation(const Vec&)> apply;
  double sigma = 0.0;
  double gamma = 0.0;
  double eps = 0.0;
  /// Lipschitz constant of the composite map.
  double L = 1.0;
  /// Factor on (gamma + sigma) and on the Monte-Carlo slack.
  double multiplier = 1.0;
};

using StepFamily = std::function<Step(int k)>;

constexpr double kDivergenceGuard = 1e9;

/// x_{k+1} = step_k(x_k) for k < K. Throws DivergenceError on a non-finite
/// iterate or ||x_k|| > kDivergenceGuard.
Trace iterate(const StepFamily& steps, const Vec& x0, int K, const std::optional<Vec>& target);

/// Builds g_k for schedule value eps_k. The envelope uses
/// gamma_k = max(gamma of g_k, schedule gamma_k).
using ApproxFactory = std::function<ApproxOperator(double eps)>;

Trace proximal_point_run(const ApproxFactory& make_g, const Schedule& schedule, const Vec& x0,
                         int K, const std::optional<Vec>& target);

struct SplittingProblem {
  Algorithm algorithm = Algorithm::fb;
  Order order = Order::g_first;
  SmoothTerm f;
  double tau = 1.0;
};

Operator make_splitting_operator(const SplittingProblem& prob, VecMap g);

/// Composite contraction factor for g with Lipschitz constant L_g.
double composite_factor(const SplittingProblem& prob, double L_g);

Trace run_splitting(const SplittingProblem& prob, const ApproxFactory& make_g,
                    const Schedule& schedule, const Vec& x0, int K,
                    const std::optional<Vec>& target);

/// Fixed point of the exact operator (eps = 0), by plain iteration to 1e-12.
Vec reference_fixed_point(const SplittingProblem& prob, const Penalty& p, double lambda,
                          const Vec& x0, int max_iter = 10000, double tol = 1e-12);

}  // namespace iprox
