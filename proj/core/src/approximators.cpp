#include "iprox/approximators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "iprox/errors.hpp"
#include "iprox/rng.hpp"

namespace iprox {

namespace {

constexpr double kGolden = 0.6180339887498949;

Vec zeros_if_empty(const Vec& v, int dim) { return v.size() == dim ? v : Vec::Zero(dim); }

std::vector<double> to_vector(const Vec& v) { return {v.data(), v.data() + v.size()}; }

// Largest t in [0, hi] with gap(t) <= eps, for gap nondecreasing in t.
template <class Gap>
double bisect_boundary(Gap&& gap, double eps, double hi) {
  if (hi <= 0.0) return 0.0;
  if (gap(hi) <= eps) return hi;
  double lo = 0.0;
  for (int it = 0; it < 200 && hi - lo > 1e-16 * (1.0 + hi); ++it) {
    const double mid = 0.5 * (lo + hi);
    if (gap(mid) <= eps) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return lo;
}

bool is_quadratic(const Penalty& p) { return p.kind == PenaltyKind::sq_l2; }

}  // namespace

std::string_view to_string(PolicyKind k) {
  switch (k) {
    case PolicyKind::exact:
      return "exact";
    case PolicyKind::fixed:
      return "fixed";
    case PolicyKind::random_sphere:
      return "random";
    case PolicyKind::adversarial:
      return "adversarial";
    case PolicyKind::center:
      return "center";
    case PolicyKind::boundary:
      return "boundary";
    case PolicyKind::steiner:
      return "steiner";
    case PolicyKind::gaussian_bump:
      return "gaussian_bump";
    case PolicyKind::shrink:
      return "shrink";
    case PolicyKind::monte_carlo:
      return "monte_carlo";
  }
  return "?";
}

PolicyKind policy_kind_from_string(std::string_view s) {
  for (auto k : {PolicyKind::exact, PolicyKind::fixed, PolicyKind::random_sphere,
                 PolicyKind::adversarial, PolicyKind::center, PolicyKind::boundary,
                 PolicyKind::steiner, PolicyKind::gaussian_bump, PolicyKind::shrink,
                 PolicyKind::monte_carlo}) {
    if (to_string(k) == s) return k;
  }
  throw std::invalid_argument("unknown policy '" + std::string(s) + "'");
}

Policy Policy::exact() { return Policy{}; }

Policy Policy::fixed(Vec v) {
  Policy p;
  p.kind = PolicyKind::fixed;
  p.vec = std::move(v);
  return p;
}

Policy Policy::random_sphere() {
  Policy p;
  p.kind = PolicyKind::random_sphere;
  p.direction = DirectionMode::per_point;
  return p;
}

Policy Policy::adversarial(Vec anchor) {
  Policy p;
  p.kind = PolicyKind::adversarial;
  p.direction = DirectionMode::radial;
  p.anchor = std::move(anchor);
  return p;
}

Policy Policy::center() {
  Policy p;
  p.kind = PolicyKind::center;
  return p;
}

Policy Policy::boundary(DirectionMode mode, Vec direction) {
  Policy p;
  p.kind = PolicyKind::boundary;
  p.direction = mode;
  p.vec = std::move(direction);
  return p;
}

Policy Policy::steiner() {
  Policy p;
  p.kind = PolicyKind::steiner;
  return p;
}

Policy Policy::gaussian_bump(Vec e) {
  Policy p;
  p.kind = PolicyKind::gaussian_bump;
  p.vec = std::move(e);
  return p;
}

Policy Policy::shrink(double n) {
  Policy p;
  p.kind = PolicyKind::shrink;
  p.shrink_n = n;
  return p;
}

Policy Policy::monte_carlo(long samples, long pilot_samples) {
  Policy p;
  p.kind = PolicyKind::monte_carlo;
  p.samples = samples;
  p.pilot_samples = pilot_samples;
  return p;
}

ApproxOperator::ApproxOperator(ApproxKind kind, Penalty p, double lambda, double eps,
                               Policy policy, std::uint64_t seed)
    : kind_(kind),
      penalty_(std::move(p)),
      lambda_(lambda),
      eps_(eps),
      policy_(std::move(policy)),
      seed_(seed),
      pc_(prox_constants(penalty_, lambda)) {
  require(eps_ >= 0 && std::isfinite(eps_), "eps must be a nonnegative number");
  const int n = penalty_.dim;
  const PolicyKind pk = policy_.kind;
  auto allow = [&](std::initializer_list<PolicyKind> ok) {
    if (std::find(ok.begin(), ok.end(), pk) == ok.end()) {
      throw ConstraintError("policy '" + std::string(to_string(pk)) +
                            "' is not valid for approximation kind " +
                            std::string(to_string(kind_)));
    }
  };
  switch (kind_) {
    case ApproxKind::a:
    case ApproxKind::b:
      allow({PolicyKind::exact, PolicyKind::fixed, PolicyKind::random_sphere,
             PolicyKind::adversarial});
      break;
    case ApproxKind::c:
      allow({PolicyKind::exact, PolicyKind::center, PolicyKind::boundary,
             PolicyKind::adversarial});
      break;
    case ApproxKind::d:
      allow({PolicyKind::gaussian_bump, PolicyKind::shrink});
      break;
    case ApproxKind::e:
      allow({PolicyKind::exact, PolicyKind::center, PolicyKind::boundary,
             PolicyKind::adversarial, PolicyKind::steiner});
      break;
    case ApproxKind::f:
      allow({PolicyKind::monte_carlo});
      require(eps_ > 0, "type (f) needs eps > 0");
      require(policy_.samples > 0, "type (f) needs a positive sample count");
      break;
  }
  if (pk == PolicyKind::adversarial) policy_.direction = DirectionMode::radial;
  if (pk == PolicyKind::random_sphere) policy_.direction = DirectionMode::per_point;
  policy_.anchor = zeros_if_empty(policy_.anchor, n);
  require_dim(policy_.anchor.size(), n, "policy anchor");

  if (policy_.vec.size() > 0 && pk != PolicyKind::shrink) {
    require_dim(policy_.vec.size(), n, "policy vector");
  }
  if (pk == PolicyKind::fixed) {
    require(policy_.vec.size() == n, "fixed policy needs a vector");
    if (policy_.vec.norm() > eps_ * (1.0 + 1e-12)) {
      throw ConstraintError("error vector norm exceeds eps");
    }
  }
  if (pk == PolicyKind::boundary && policy_.vec.size() == n && policy_.vec.norm() > 0) {
    seeded_dir_ = policy_.vec.normalized();
  } else {
    Rng rng(derive_seed(seed_, 0xd1));
    seeded_dir_ = unit_direction(rng, n);
  }

  if (kind_ == ApproxKind::d) {
    require(policy_.box > 0, "compact box half-width must be positive");
    if (pk == PolicyKind::gaussian_bump) {
      if (policy_.vec.size() != n) policy_.vec = eps_ * seeded_dir_;
      // Hessian of eps*exp(-|x-e|^2/2) has spectral norm <= eps.
      L_eps_ = pc_.L_psi + eps_;
    } else {
      const double r2 = n * policy_.box * policy_.box;
      if (policy_.shrink_n == 0.0) {
        require(eps_ > 0, "shrink family needs eps > 0 or an explicit n");
        policy_.shrink_n = r2 / (2.0 * eps_);
      }
      require(policy_.shrink_n > 0, "shrink parameter n must be positive");
      if (r2 / (2.0 * policy_.shrink_n) > eps_ * (1.0 + 1e-12)) {
        throw ConstraintError("shrink parameter violates the sup-gap bound on K");
      }
      const double inv = 1.0 / policy_.shrink_n;
      L_eps_ = std::max(pc_.L_psi - inv, inv);
    }
  }
  if (kind_ == ApproxKind::e && pk == PolicyKind::steiner && !is_quadratic(penalty_)) {
    require(n <= 3, "steiner selector needs dimension <= 3");
  }
}

Vec ApproxOperator::direction_for(const Vec& y, const Vec& base) const {
  switch (policy_.direction) {
    case DirectionMode::seeded:
      return seeded_dir_;
    case DirectionMode::per_point: {
      Rng rng(hash_point(seed_, y));
      return unit_direction(rng, dim());
    }
    case DirectionMode::radial: {
      const Vec d = base - policy_.anchor;
      const double n = d.norm();
      return n > 0 ? Vec(d / n) : seeded_dir_;
    }
  }
  return seeded_dir_;
}

Vec ApproxOperator::evaluate(const Vec& y) const { return evaluate_full(y).point; }

Evaluation ApproxOperator::evaluate_full(const Vec& y) const {
  require_dim(y.size(), dim(), "ApproxOperator::evaluate");
  Evaluation out;
  const PolicyKind pk = policy_.kind;
  switch (kind_) {
    case ApproxKind::a: {
      out.point = prox(y);
      if (pk == PolicyKind::fixed) {
        out.point += policy_.vec;
      } else if (pk != PolicyKind::exact) {
        out.point += eps_ * direction_for(y, out.point);
      }
      break;
    }
    case ApproxKind::b: {
      Vec shifted = y;
      if (pk == PolicyKind::fixed) {
        shifted += policy_.vec;
      } else if (pk != PolicyKind::exact) {
        shifted += eps_ * direction_for(y, y);
      }
      out.point = prox(shifted);
      break;
    }
    case ApproxKind::c:
      out.point = eval_c(y);
      break;
    case ApproxKind::d:
      out.point = eval_d(y);
      break;
    case ApproxKind::e:
      out.point = eval_e(y);
      break;
    case ApproxKind::f: {
      HJConfig cfg;
      cfg.lambda = lambda_;
      cfg.eps = eps_;
      cfg.samples = policy_.samples;
      cfg.pilot_samples = policy_.pilot_samples;
      cfg.seed = seed_;
      cfg.jobs = policy_.jobs;
      const HJEstimate est = type_f_prox(penalty_, cfg, y);
      out.point = est.point;
      out.stderr_norm = est.stderr_norm();
      out.ess = est.ess;
      break;
    }
  }
  if (!out.point.allFinite()) throw DivergenceError("approximation produced a non-finite value");
  return out;
}

Vec ApproxOperator::eval_c(const Vec& y) const {
  const Vec p = prox(y);
  if (policy_.kind == PolicyKind::exact || policy_.kind == PolicyKind::center || eps_ == 0.0) {
    return p;
  }
  const Vec d = direction_for(y, p);
  double t;
  if (is_quadratic(penalty_)) {
    // d_eps(lambda phi)(z) is the ball around k z of radius sqrt(2 k eps).
    const double k = lambda_ * (penalty_.weight + 2.0 * penalty_.shift);
    t = std::sqrt(2.0 * k * eps_) / (1.0 + k);
  } else {
    auto gap = [&](double s) {
      const Vec z = p + s * d;
      return inclusion_gap(penalty_, lambda_, z, y - z);
    };
    const double hi = std::sqrt(eps_ / (1.0 - pc_.rho)) * (1.0 + 1e-9);
    t = bisect_boundary(gap, eps_, hi);
  }
  const Vec z = p + t * d;
  const double g = inclusion_gap(penalty_, lambda_, z, y - z);
  if (!(g <= eps_ * (1.0 + 1e-9) + 1e-12)) {
    throw ConstraintError("type (c) self-test failed: inclusion gap " + std::to_string(g));
  }
  return z;
}

Vec ApproxOperator::eval_d(const Vec& y) const {
  const Vec p = prox(y);
  if (policy_.kind == PolicyKind::gaussian_bump) {
    const Vec r = y - policy_.vec;
    return p - eps_ * r * std::exp(-0.5 * r.squaredNorm());
  }
  return p - y / policy_.shrink_n;
}

double ApproxOperator::psi_eps(const Vec& y) const {
  require(kind_ == ApproxKind::d, "psi_eps is defined for type (d) only");
  const double psi = psi_potential(penalty_, y, lambda_);
  if (policy_.kind == PolicyKind::gaussian_bump) {
    return psi + eps_ * std::exp(-0.5 * (y - policy_.vec).squaredNorm());
  }
  return psi - y.squaredNorm() / (2.0 * policy_.shrink_n);
}

double ApproxOperator::sup_gap_on_box() const {
  require(kind_ == ApproxKind::d, "sup_gap_on_box is defined for type (d) only");
  if (policy_.kind == PolicyKind::gaussian_bump) {
    // The bump peaks at e; if e lies outside K the peak is at the nearest box point.
    const Vec c = policy_.vec.cwiseMax(-policy_.box).cwiseMin(policy_.box);
    return eps_ * std::exp(-0.5 * (c - policy_.vec).squaredNorm());
  }
  return dim() * policy_.box * policy_.box / (2.0 * policy_.shrink_n);
}

Vec ApproxOperator::eval_e(const Vec& y) const {
  const Vec p = prox(y);
  const PolicyKind pk = policy_.kind;
  if (pk == PolicyKind::exact || pk == PolicyKind::center || eps_ == 0.0) return p;
  if (pk == PolicyKind::steiner) {
    if (is_quadratic(penalty_)) return p;
    return steiner_point(psi_eps_subdifferential(y));
  }
  const Vec d = direction_for(y, p);
  const double r = std::sqrt(2.0 * pc_.L_psi * eps_);
  double t;
  if (is_quadratic(penalty_)) {
    t = r;
  } else {
    auto gap = [&](double s) { return psi_subgradient_gap(penalty_, lambda_, y, p + s * d); };
    t = bisect_boundary(gap, eps_, r * (1.0 + 1e-9));
  }
  const Vec s = p + t * d;
  const double g = psi_subgradient_gap(penalty_, lambda_, y, s);
  if (!(g <= eps_ * (1.0 + 1e-9) + 1e-12)) {
    throw ConstraintError("type (e) membership violated: gap " + std::to_string(g));
  }
  return s;
}

double psi_eps_support(const Penalty& p, double lambda, double eps, const Vec& y, const Vec& u) {
  const double un = u.norm();
  if (un == 0.0) return 0.0;
  const double psi_y = psi_potential(p, y, lambda);
  if (eps == 0.0) return prox_exact(p, lambda, y).dot(u);
  auto q = [&](double logt) {
    const double t = std::exp(logt);
    return (psi_potential(p, y + t * u, lambda) - psi_y + eps) / t;
  };
  // q is unimodal in log t (perspective of a convex function).
  const double centre = std::log(std::sqrt(eps) / un);
  double a = centre - 30.0, b = centre + 30.0;
  double c = b - kGolden * (b - a), d = a + kGolden * (b - a);
  double fc = q(c), fd = q(d);
  for (int it = 0; it < 160; ++it) {
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - kGolden * (b - a);
      fc = q(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + kGolden * (b - a);
      fd = q(d);
    }
  }
  return std::min(fc, fd);
}

ConvexSet ApproxOperator::psi_eps_subdifferential(const Vec& y) const {
  require_dim(y.size(), dim(), "psi_eps_subdifferential");
  if (is_quadratic(penalty_)) return ConvexSet::ball(prox(y), std::sqrt(2.0 * pc_.L_psi * eps_));
  const Penalty pen = penalty_;
  const double lam = lambda_, eps = eps_;
  return ConvexSet::from_support(
      dim(), [pen, lam, eps, y](const Vec& u) { return psi_eps_support(pen, lam, eps, y, u); },
      [pen, lam, eps, y](const Vec& s, double tol) {
        return psi_subgradient_gap(pen, lam, y, s) <= eps + tol;
      });
}

BoundConstants ApproxOperator::constants() const {
  BoundConstants c;
  c.L_psi = pc_.L_psi;
  c.rho = penalty_.rho();
  c.lambda = lambda_;
  c.N = dim();
  if (kind_ == ApproxKind::d) c.L_eps = L_eps_;
  return c;
}

double ApproxOperator::sigma() const { return sigma_bound(kind_, eps_, constants()); }

LipschitzPair ApproxOperator::lipschitz() const { return lipschitz_pair(kind_, eps_, constants()); }

nlohmann::json ApproxOperator::to_json() const {
  nlohmann::json j;
  j["kind"] = std::string(to_string(kind_));
  j["eps"] = eps_;
  j["lambda"] = lambda_;
  j["seed"] = seed_;
  j["penalty"] = penalty_.to_json();
  nlohmann::json pol;
  pol["kind"] = std::string(to_string(policy_.kind));
  static constexpr const char* kModes[] = {"seeded", "per_point", "radial"};
  pol["direction"] = kModes[static_cast<int>(policy_.direction)];
  if (policy_.vec.size() > 0) pol["vec"] = to_vector(policy_.vec);
  pol["anchor"] = to_vector(policy_.anchor);
  if (kind_ == ApproxKind::d) {
    pol["box"] = policy_.box;
    if (policy_.kind == PolicyKind::shrink) pol["n"] = policy_.shrink_n;
  }
  if (kind_ == ApproxKind::f) {
    pol["samples"] = policy_.samples;
    pol["pilot_samples"] = policy_.pilot_samples;
  }
  j["policy"] = pol;
  j["sigma"] = sigma();
  const LipschitzPair lp = lipschitz();
  j["lipschitz"] = {{"L", lp.L}, {"gamma", lp.gamma}};
  if (kind_ == ApproxKind::d) j["L_eps"] = L_eps_;
  return j;
}

ApproxOperator make_type_a(const Penalty& p, double lambda, double eps, Policy error_policy,
                           std::uint64_t seed) {
  return ApproxOperator(ApproxKind::a, p, lambda, eps, std::move(error_policy), seed);
}

ApproxOperator make_type_b(const Penalty& p, double lambda, double eps, Policy residual_policy,
                           std::uint64_t seed) {
  return ApproxOperator(ApproxKind::b, p, lambda, eps, std::move(residual_policy), seed);
}

ApproxOperator make_type_c(const Penalty& p, double lambda, double eps, Policy slack_policy,
                           std::uint64_t seed) {
  return ApproxOperator(ApproxKind::c, p, lambda, eps, std::move(slack_policy), seed);
}

ApproxOperator make_type_d(const Penalty& p, double lambda, double eps, Policy family,
                           std::uint64_t seed) {
  return ApproxOperator(ApproxKind::d, p, lambda, eps, std::move(family), seed);
}

ApproxOperator make_type_e(const Penalty& p, double lambda, double eps, Policy selector,
                           std::uint64_t seed) {
  return ApproxOperator(ApproxKind::e, p, lambda, eps, std::move(selector), seed);
}

ApproxOperator make_type_f(const Penalty& p, double lambda, double eps, Policy sampling,
                           std::uint64_t seed) {
  return ApproxOperator(ApproxKind::f, p, lambda, eps, std::move(sampling), seed);
}

ApproxOperator make_approx(ApproxKind kind, const Penalty& p, double lambda, double eps,
                           Policy policy, std::uint64_t seed) {
  return ApproxOperator(kind, p, lambda, eps, std::move(policy), seed);
}

double empirical_sigma(const ApproxOperator& g, const std::vector<Vec>& cloud) {
  double s = 0.0;
  for (const Vec& x : cloud) s = std::max(s, (g.evaluate(x) - g.prox(x)).norm());
  return s;
}

LipschitzFit fit_lipschitz(const std::vector<Vec>& xs, const std::vector<Vec>& gx,
                           const LipschitzPair& theory, const std::vector<double>& slack) {
  require(xs.size() == gx.size(), "fit_lipschitz: size mismatch");
  require(slack.empty() || slack.size() == xs.size(), "fit_lipschitz: slack size mismatch");
  LipschitzFit fit;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    for (std::size_t j = i + 1; j < xs.size(); ++j) {
      const double dx = (xs[i] - xs[j]).norm();
      if (dx == 0.0) continue;
      double dg = (gx[i] - gx[j]).norm();
      if (!slack.empty()) dg = std::max(dg - slack[i] - slack[j], 0.0);
      const double L = std::max(dg - theory.gamma, 0.0) / dx;
      if (L > fit.L) {
        fit.L = L;
        fit.i = i;
        fit.j = j;
      }
      fit.gamma = std::max(fit.gamma, dg - theory.L * dx);
    }
  }
  return fit;
}

LipschitzPair empirical_lipschitz(const ApproxOperator& g, const std::vector<Vec>& cloud) {
  require(cloud.size() >= 2, "empirical_lipschitz needs at least two points");
  std::vector<Vec> gx;
  gx.reserve(cloud.size());
  for (const Vec& x : cloud) gx.push_back(g.evaluate(x));
  const LipschitzPair theory = g.lipschitz();
  return {fit_lipschitz(cloud, gx, theory).L, theory.gamma};
}

}  // namespace iprox
