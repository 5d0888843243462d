#include "iprox/splitting.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "iprox/errors.hpp"

namespace iprox {

SmoothTerm SmoothTerm::diagonal_quadratic(double mu, double L_f, const Vec& center) {
  require(mu > 0 && L_f >= mu, "smooth term needs 0 < mu <= L_f");
  const Eigen::Index n = center.size();
  require(n > 0, "smooth term needs a non-empty centre");
  Vec a(n);
  if (n == 1) {
    a[0] = L_f;
  } else {
    for (Eigen::Index i = 0; i < n; ++i)
      a[i] = mu + (L_f - mu) * static_cast<double>(i) / static_cast<double>(n - 1);
  }
  SmoothTerm f;
  f.mu = mu;
  f.L_f = L_f;
  f.minimizer = center;
  f.grad = [a, center](const Vec& x) -> Vec { return a.cwiseProduct(x - center); };
  f.prox = [a, center](double tau, const Vec& x) -> Vec {
    return ((x + tau * a.cwiseProduct(center)).array() / (1.0 + tau * a.array())).matrix();
  };
  return f;
}

Operator::Operator(VecMap f) : f_(std::move(f)), count_(std::make_shared<std::atomic<long>>(0)) {}

Vec Operator::operator()(const Vec& x) const {
  count_->fetch_add(1, std::memory_order_relaxed);
  return f_(x);
}

std::string_view to_string(Algorithm a) {
  switch (a) {
    case Algorithm::ppa: return "ppa";
    case Algorithm::fb: return "fb";
    case Algorithm::pr: return "pr";
    case Algorithm::dr: return "dr";
  }
  return "?";
}

Algorithm algorithm_from_string(std::string_view s) {
  if (s == "ppa") return Algorithm::ppa;
  if (s == "fb") return Algorithm::fb;
  if (s == "pr") return Algorithm::pr;
  if (s == "dr") return Algorithm::dr;
  throw std::invalid_argument("unknown algorithm '" + std::string(s) + "'");
}

std::string_view to_string(Order o) { return o == Order::g_first ? "g_first" : "f_first"; }

Order order_from_string(std::string_view s) {
  if (s == "g_first" || s == "g") return Order::g_first;
  if (s == "f_first" || s == "f") return Order::f_first;
  throw std::invalid_argument("unknown order '" + std::string(s) + "'");
}

Operator fb_operator(VecMap g, const SmoothTerm& f, double tau) {
  require(tau > 0, "step size must be positive");
  auto grad = f.grad;
  return Operator([g = std::move(g), grad, tau](const Vec& x) -> Vec { return g(x - tau * grad(x)); });
}

Operator pr_operator(VecMap g, const SmoothTerm& f, double tau, Order order) {
  require(tau > 0, "step size must be positive");
  auto prox = f.prox;
  auto rf = [prox, tau](const Vec& x) -> Vec { return 2.0 * prox(tau, x) - x; };
  auto rg = [g = std::move(g)](const Vec& x) -> Vec { return 2.0 * g(x) - x; };
  if (order == Order::g_first) return Operator([rf, rg](const Vec& x) { return rg(rf(x)); });
  return Operator([rf, rg](const Vec& x) { return rf(rg(x)); });
}

Operator dr_operator(VecMap g, const SmoothTerm& f, double tau, Order order) {
  Operator pr = pr_operator(std::move(g), f, tau, order);
  return Operator([pr](const Vec& x) -> Vec { return 0.5 * (x + pr(x)); });
}

double gradient_step_factor(double mu, double L_f, double tau) {
  return std::max(std::abs(1.0 - tau * mu), std::abs(1.0 - tau * L_f));
}

double reflected_resolvent_factor(double mu, double L_f, double tau) {
  auto r = [tau](double a) { return std::abs(1.0 - tau * a) / (1.0 + tau * a); };
  return std::max(r(mu), r(L_f));
}

double optimal_tau(Algorithm a, double mu, double L_f) {
  switch (a) {
    case Algorithm::ppa: return 1.0;
    case Algorithm::fb: return 2.0 / (mu + L_f);
    case Algorithm::pr:
    case Algorithm::dr: return 1.0 / std::sqrt(mu * L_f);
  }
  return 1.0;
}

double contraction_factor(Algorithm a, double L_g, double mu, double L_f, double tau) {
  switch (a) {
    case Algorithm::ppa: return L_g;
    case Algorithm::fb: return L_g * gradient_step_factor(mu, L_f, tau);
    case Algorithm::pr: return (2.0 * L_g + 1.0) * reflected_resolvent_factor(mu, L_f, tau);
    case Algorithm::dr:
      return (L_g + 0.5) * reflected_resolvent_factor(mu, L_f, tau) + 0.5;
  }
  return L_g;
}

double error_multiplier(Algorithm a, Order order, double L_R) {
  switch (a) {
    case Algorithm::ppa:
    case Algorithm::fb: return 1.0;
    case Algorithm::pr: return order == Order::g_first ? 2.0 : 2.0 * L_R;
    case Algorithm::dr: return order == Order::g_first ? 1.0 : L_R;
  }
  return 1.0;
}

double ball_radius(Algorithm a, Order order, double L_composite, double gamma, double sigma,
                   double L_R) {
  if (!(L_composite < 1.0))
    throw NoContraction("composite Lipschitz constant " + std::to_string(L_composite) + " >= 1");
  return error_multiplier(a, order, L_R) * (gamma + sigma) / (1.0 - L_composite);
}

}  // namespace iprox
