#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "iprox/bounds.hpp"
#include "iprox/convex_set.hpp"
#include "iprox/hjprox.hpp"
#include "iprox/penalty.hpp"

namespace iprox {

enum class PolicyKind {
  exact,          // e = 0 / r = 0
  fixed,          // (a)/(b): constant vector
  random_sphere,  // (a)/(b): eps * seeded direction per point
  adversarial,    // (a)/(b): radially away from the anchor; (c)/(e): boundary, radial
  center,         // (c): prox; (e): gradient of psi
  boundary,       // (c)/(e): furthest admissible point along a direction
  steiner,        // (e): Steiner point of the eps-subdifferential of psi
  gaussian_bump,  // (d)
  shrink,         // (d)
  monte_carlo,    // (f)
};

std::string_view to_string(PolicyKind k);
PolicyKind policy_kind_from_string(std::string_view s);

/// How a boundary selector picks its direction.
enum class DirectionMode {
  seeded,     // one direction per operator, drawn from the seed (or `vec`)
  per_point,  // fresh seeded direction for every input point
  radial,     // away from the anchor
};

struct Policy {
  PolicyKind kind = PolicyKind::exact;
  DirectionMode direction = DirectionMode::seeded;
  /// Fixed error / residual, explicit boundary direction, or bump centre.
  Vec vec;
  /// Reference point for adversarial policies; defaults to the minimizer of phi.
  Vec anchor;
  /// Shrink parameter n; zero means the smallest n meeting the sup-gap bound.
  double shrink_n = 0.0;
  /// Half-width of the compact box K used by type (d).
  double box = 5.0;
  /// Type (f) sampling.
  long samples = 100000;
  /// Samples per pilot pass of the proposal search (see HJConfig).
  long pilot_samples = 1000;
  int jobs = 1;

  static Policy exact();
  static Policy fixed(Vec v);
  static Policy random_sphere();
  static Policy adversarial(Vec anchor = {});
  static Policy center();
  static Policy boundary(DirectionMode mode = DirectionMode::seeded, Vec direction = {});
  static Policy steiner();
  static Policy gaussian_bump(Vec e = {});
  static Policy shrink(double n = 0.0);
  static Policy monte_carlo(long samples = 100000, long pilot_samples = 1000);
};

struct Evaluation {
  Vec point;
  /// Norm of the per-coordinate Monte-Carlo standard error (0 if deterministic).
  double stderr_norm = 0.0;
  double ess = 0.0;
};

/// An evaluatable approximation g of prox_{lambda phi}.
class ApproxOperator {
 public:
  ApproxOperator(ApproxKind kind, Penalty p, double lambda, double eps, Policy policy,
                 std::uint64_t seed);

  ApproxKind kind() const { return kind_; }
  double eps() const { return eps_; }
  double lambda() const { return lambda_; }
  const Penalty& penalty() const { return penalty_; }
  const Policy& policy() const { return policy_; }
  std::uint64_t seed() const { return seed_; }
  int dim() const { return penalty_.dim; }

  Vec evaluate(const Vec& y) const;
  Evaluation evaluate_full(const Vec& y) const;
  Vec prox(const Vec& y) const { return prox_exact(penalty_, lambda_, y); }

  /// Constants for the bound formulas of this operator.
  BoundConstants constants() const;
  double sigma() const;
  LipschitzPair lipschitz() const;

  /// Type (d) only: psi_eps and its Lipschitz gradient constant.
  double psi_eps(const Vec& y) const;
  double L_eps() const { return L_eps_; }
  /// Type (d) only: sup of |psi_eps - psi| over the box K.
  double sup_gap_on_box() const;

  /// Type (e): eps-subdifferential of psi at y.
  ConvexSet psi_eps_subdifferential(const Vec& y) const;

  nlohmann::json to_json() const;

 private:
  Vec direction_for(const Vec& y, const Vec& base) const;
  Vec eval_c(const Vec& y) const;
  Vec eval_d(const Vec& y) const;
  Vec eval_e(const Vec& y) const;

  ApproxKind kind_;
  Penalty penalty_;
  double lambda_;
  double eps_;
  Policy policy_;
  std::uint64_t seed_;
  ProxConstants pc_;
  Vec seeded_dir_;
  double L_eps_ = 0.0;
};

ApproxOperator make_type_a(const Penalty& p, double lambda, double eps, Policy error_policy,
                           std::uint64_t seed = 0);
ApproxOperator make_type_b(const Penalty& p, double lambda, double eps, Policy residual_policy,
                           std::uint64_t seed = 0);
ApproxOperator make_type_c(const Penalty& p, double lambda, double eps, Policy slack_policy,
                           std::uint64_t seed = 0);
ApproxOperator make_type_d(const Penalty& p, double lambda, double eps, Policy family,
                           std::uint64_t seed = 0);
ApproxOperator make_type_e(const Penalty& p, double lambda, double eps, Policy selector,
                           std::uint64_t seed = 0);
ApproxOperator make_type_f(const Penalty& p, double lambda, double eps, Policy sampling,
                           std::uint64_t seed = 0);
ApproxOperator make_approx(ApproxKind kind, const Penalty& p, double lambda, double eps,
                           Policy policy, std::uint64_t seed = 0);

/// Support function of d_eps psi(y) in direction u, computed as
/// inf_{t>0} (psi(y + t u) - psi(y) + eps) / t.
double psi_eps_support(const Penalty& p, double lambda, double eps, const Vec& y, const Vec& u);

/// max over the cloud of ||g(x) - prox(x)||.
double empirical_sigma(const ApproxOperator& g, const std::vector<Vec>& cloud);

struct LipschitzFit {
  /// Smallest L with ||g(x_i) - g(x_j)|| <= L ||x_i - x_j|| + gamma (+ slack).
  double L = 0.0;
  /// Smallest gamma with the same inequality at the given L.
  double gamma = 0.0;
  std::size_t i = 0;
  std::size_t j = 0;
};

/// Pairwise fit on precomputed images. slack[i] (optional) is added per point,
/// used for Monte-Carlo error bars.
LipschitzFit fit_lipschitz(const std::vector<Vec>& xs, const std::vector<Vec>& gx,
                           const LipschitzPair& theory, const std::vector<double>& slack = {});

LipschitzPair empirical_lipschitz(const ApproxOperator& g, const std::vector<Vec>& cloud);

}  // namespace iprox
