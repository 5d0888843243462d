#include "iprox/km.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "iprox/errors.hpp"

namespace iprox {

KMParams KMParams::constant(int K, double alpha, double beta, double lambda) {
  KMParams p;
  p.alpha.assign(static_cast<std::size_t>(K), alpha);
  p.beta.assign(static_cast<std::size_t>(K), beta);
  p.lambda.assign(static_cast<std::size_t>(K), lambda);
  return p;
}

namespace {

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace

KMReport validate_km_params(const KMParams& p, int K) {
  KMReport r;
  const auto n = static_cast<std::size_t>(K);
  if (K < 1 || p.alpha.size() < n || p.beta.size() < n || p.lambda.size() < n) {
    r.violations.push_back("sequences must be defined on 1..K");
    return r;
  }
  constexpr double inf = std::numeric_limits<double>::infinity();
  r.alpha_inf = inf;
  r.alpha_sup = -inf;
  r.lambda_inf = inf;
  r.lambda_sup = -inf;
  r.mu_sup = -inf;
  r.compatibility = -inf;
  double mu_prev = -inf;
  bool mu_monotone = true;
  bool beta_range = true;
  for (std::size_t i = 0; i < n; ++i) {
    const double a = p.alpha[i], b = p.beta[i], l = p.lambda[i];
    r.alpha_inf = std::min(r.alpha_inf, a);
    r.alpha_sup = std::max(r.alpha_sup, a);
    r.lambda_inf = std::min(r.lambda_inf, l);
    r.lambda_sup = std::max(r.lambda_sup, l);
    if (!(b >= 0 && b <= 1)) beta_range = false;
    const double mu = (1 - l) * a + l * b;
    r.mu_sup = std::max(r.mu_sup, mu);
    if (mu < mu_prev) mu_monotone = false;
    mu_prev = mu;
    if (i >= 1 && l > 0 && p.lambda[i - 1] > 0) {
      const double ap = p.alpha[i - 1], lp = p.lambda[i - 1];
      const double c = (1 - l) * a * (1 + a) + l * b * (1 + b) + (1 / l - 1) * a * (1 - a) -
                       (1 / lp - 1) * (1 - ap);
      r.compatibility = std::max(r.compatibility, c);
    }
  }
  auto in01 = [](double v) { return v >= 0 && v < 1; };
  if (!in01(r.alpha_inf) || !in01(r.alpha_sup))
    r.violations.push_back("alpha, A must lie in [0,1): A=" + fmt(r.alpha_sup));
  if (!in01(r.mu_sup)) r.violations.push_back("M must lie in [0,1): M=" + fmt(r.mu_sup));
  if (!(r.lambda_inf > 0 && r.lambda_sup < 1))
    r.violations.push_back("lambda, Lambda must lie in (0,1): lambda=" + fmt(r.lambda_inf) +
                           " Lambda=" + fmt(r.lambda_sup));
  if (!beta_range) r.violations.push_back("beta_k must lie in [0,1]");
  if (!mu_monotone) r.violations.push_back("mu_k must be nondecreasing");
  if (!(r.compatibility < 0))
    r.violations.push_back("compatibility supremum must be negative: " + fmt(r.compatibility));
  r.valid = r.violations.empty();
  return r;
}

Trace km_run(const VecMap& T, const KMParams& p, const Vec& x0, int K,
             const std::optional<Vec>& target) {
  const KMReport rep = validate_km_params(p, K);
  if (!rep.valid) throw ConstraintError("invalid KM parameters: " + rep.violations.front());
  const Eigen::Index n = x0.size();
  auto err = [n](const std::function<Vec(int)>& f, int k) -> Vec {
    if (!f) return Vec::Zero(n);
    Vec e = f(k);
    require_dim(e.size(), n, "km_run error term");
    return e;
  };
  Trace t;
  auto record = [&](const Vec& x) {
    if (!x.allFinite()) throw DivergenceError("non-finite KM iterate at k=" + std::to_string(t.size()));
    if (x.norm() > kDivergenceGuard)
      throw DivergenceError("KM iterate norm exceeded 1e9 at k=" + std::to_string(t.size()));
    if (!t.iterates.empty()) t.residual.push_back((x - t.iterates.back()).norm());
    t.iterates.push_back(x);
    if (target) t.dist.push_back((x - *target).norm());
  };
  Vec prev = x0, x = x0;
  record(x);
  for (int k = 1; k <= K; ++k) {
    const auto i = static_cast<std::size_t>(k - 1);
    const Vec d = x - prev;
    const Vec y = x + p.alpha[i] * d + err(p.eps_k, k);
    const Vec z = x + p.beta[i] * d + err(p.rho_k, k);
    Vec next = (1 - p.lambda[i]) * y + p.lambda[i] * T(z) + err(p.theta_k, k);
    prev = std::move(x);
    x = std::move(next);
    record(x);
  }
  return t;
}

}  // namespace iprox
