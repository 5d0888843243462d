#pragma once

#include <atomic>
#include <memory>
#include <string_view>

#include "iprox/types.hpp"

namespace iprox {

/// mu-strongly convex, L_f-smooth term f.
struct SmoothTerm {
  double mu = 1.0;
  double L_f = 1.0;
  VecMap grad;
  /// (tau, x) -> prox_{tau f}(x).
  std::function<Vec(double, const Vec&)> prox;
  Vec minimizer;

  /// f(x) = 1/2 sum_i a_i (x_i - c_i)^2 with a_i spread evenly over [mu, L_f]
  /// (a single coordinate uses a = L_f).
  static SmoothTerm diagonal_quadratic(double mu, double L_f, const Vec& center);
};

/// Map wrapper that counts evaluations; copies share the counter.
class Operator {
 public:
  Operator() = default;
  explicit Operator(VecMap f);
  Vec operator()(const Vec& x) const;
  long evaluations() const { return count_ ? count_->load() : 0; }

 private:
  VecMap f_;
  std::shared_ptr<std::atomic<long>> count_;
};

enum class Algorithm { ppa, fb, pr, dr };
enum class Order { g_first, f_first };

std::string_view to_string(Algorithm a);
Algorithm algorithm_from_string(std::string_view s);
std::string_view to_string(Order o);
Order order_from_string(std::string_view s);

/// g o (Id - tau grad f).
Operator fb_operator(VecMap g, const SmoothTerm& f, double tau);
/// g_first: (2g - Id) o (2 prox_{tau f} - Id); f_first: the reverse.
Operator pr_operator(VecMap g, const SmoothTerm& f, double tau, Order order);
/// (Id + PR) / 2.
Operator dr_operator(VecMap g, const SmoothTerm& f, double tau, Order order);

/// max(|1 - tau mu|, |1 - tau L_f|).
double gradient_step_factor(double mu, double L_f, double tau);
/// max((1 - tau mu)/(1 + tau mu), (tau L_f - 1)/(tau L_f + 1)), i.e. the
/// Lipschitz constant of 2 prox_{tau f} - Id.
double reflected_resolvent_factor(double mu, double L_f, double tau);
/// 2/(mu + L_f) for FB, 1/sqrt(mu L_f) for PR and DR, 1 for PPA.
double optimal_tau(Algorithm a, double mu, double L_f);

/// PPA: L_g. FB: L_g L_GM. PR: (2 L_g + 1) L_R. DR: (L_g + 1/2) L_R + 1/2.
double contraction_factor(Algorithm a, double L_g, double mu, double L_f, double tau);

/// Factor multiplying (gamma + sigma) in the one-step distance recursion.
double error_multiplier(Algorithm a, Order order, double L_R);

/// Limiting radius multiplier * (gamma + sigma) / (1 - L_composite).
double ball_radius(Algorithm a, Order order, double L_composite, double gamma, double sigma,
                   double L_R);

}  // namespace iprox
