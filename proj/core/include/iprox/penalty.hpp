#pragma once

#include <limits>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "iprox/convex_set.hpp"
#include "iprox/types.hpp"

namespace iprox {

enum class PenaltyKind { sq_l2, l2, l1, aniso_quad, constant, mcp };

std::string_view to_string(PenaltyKind k);
PenaltyKind penalty_kind_from_string(std::string_view name);

/// Catalog penalty phi, optionally with an added quadratic term
/// shift * ||x||^2. Values are immutable after construction.
struct Penalty {
  PenaltyKind kind = PenaltyKind::sq_l2;
  int dim = 1;
  /// gamma_pen for sq_l2 / l2 / l1, the constant c for `constant`,
  /// lambda_mcp for mcp. Unused by aniso_quad.
  double weight = 1.0;
  /// MCP concavity parameter b > 0.
  double mcp_b = 0.0;
  /// Diagonal of Q for aniso_quad.
  Vec q;
  /// alpha in phi(x) + alpha ||x||^2.
  double shift = 0.0;
  /// Half-width of the box used by grid oracles.
  double domain_bound = 10.0;

  static Penalty sq_l2(int dim, double gamma);
  static Penalty l2(int dim, double gamma);
  static Penalty l1(int dim, double gamma);
  static Penalty aniso_quad(Vec diag);
  static Penalty constant(int dim, double c);
  static Penalty mcp(int dim, double lambda_mcp, double b);

  /// phi + alpha ||.||^2 (alpha may be negative as long as the result is
  /// still weakly convex with a finite prox).
  Penalty with_quadratic(double alpha) const;

  std::string name() const;
  /// Weak-convexity modulus: phi + rho/2 ||.||^2 is convex. Zero for convex.
  double rho() const;
  /// Strong-convexity modulus (zero unless strongly convex).
  double mu() const;
  bool convex() const { return rho() == 0.0; }
  /// Largest lambda for which the prox is single valued (infinity if convex).
  double prox_bound() const;
  /// inf phi.
  double min_value() const;
  /// A minimizer of phi.
  Vec argmin() const;

  nlohmann::json to_json() const;
  bool operator==(const Penalty&) const = default;
};

struct ProxConstants {
  double lambda = 1.0;
  /// Lipschitz constant of prox_{lambda phi}.
  double L_psi = 1.0;
  /// Weak-convexity modulus of lambda*phi.
  double rho = 0.0;
  /// Strong-convexity modulus of lambda*phi.
  double mu = 0.0;
};

ProxConstants prox_constants(const Penalty& p, double lambda);

double eval(const Penalty& p, const Vec& x);

/// argmin_x phi(x) + ||x - y||^2 / (2 lambda), closed form.
Vec prox_exact(const Penalty& p, double lambda, const Vec& y);

/// Value of the proximal objective Phi_lambda(x; y).
double prox_objective(const Penalty& p, double lambda, const Vec& y, const Vec& x);

double moreau_envelope(const Penalty& p, double lambda, const Vec& y);

/// psi(y) = ||y||^2/2 - lambda u_lambda(y), whose gradient is
/// prox_{lambda phi}(y). The additive constant is zero.
double psi_potential(const Penalty& p, const Vec& y, double lambda = 1.0);

/// h(x) = lambda phi(x) + (c/2)||x||^2, with c large enough to make h convex.
double convexified_value(const Penalty& p, double lambda, double c, const Vec& x);

/// Convex conjugate of h above; +infinity outside the effective domain.
double convexified_conjugate(const Penalty& p, double lambda, double c, const Vec& w);

/// sup_x <v, x - z> - lambda phi(x) + lambda phi(z) - (r/2)||x - z||^2 where
/// r = lambda * rho. The inclusion v in d^r_eps(lambda phi)(z) holds iff this
/// gap is <= eps.
double inclusion_gap(const Penalty& p, double lambda, const Vec& z, const Vec& v);

/// psi(y) + psi*(s) - <s, y>; s is in the eps-subdifferential of psi at y
/// iff this is <= eps. Uses psi* = lambda phi + ||.||^2 / 2.
double psi_subgradient_gap(const Penalty& p, double lambda, const Vec& y, const Vec& s);

/// Distance from v to the (convex) subdifferential of phi at x.
double subdifferential_distance(const Penalty& p, const Vec& x, const Vec& v);

/// Closed-form eps-subdifferential of phi at x (sq_l2, l1 in 1D, l2).
ConvexSet eps_subdifferential(const Penalty& p, double eps, const Vec& x);

struct TransferPair {
  Vec lhs;
  Vec rhs;
};

/// prox_{gamma (phi + alpha ||.||^2)}(z) against
/// prox_{gamma phi / (2 alpha gamma + 1)}(z / (2 alpha gamma + 1)).
TransferPair prox_scaling_transfer(const Penalty& p, double gamma, double alpha, const Vec& z);

struct WeakSplit {
  double rho = 0.0;
  VecMap smooth_grad;
  Penalty convex_part;
  /// One step x -> prox_{gamma convex_part}(x - gamma rho x).
  VecMap step;
};

WeakSplit weakly_convex_split(const Penalty& p, double gamma);

}  // namespace iprox
