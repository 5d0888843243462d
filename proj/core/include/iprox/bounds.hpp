#pragma once

#include <optional>
#include <string_view>

namespace iprox {

enum class ApproxKind { a, b, c, d, e, f };

std::string_view to_string(ApproxKind k);
/// Throws std::invalid_argument("unknown approximation kind ...").
ApproxKind approx_kind_from_string(std::string_view s);

struct LipschitzPair {
  double L = 0.0;
  double gamma = 0.0;
};

/// Constants feeding the bound formulas. rho is the weak-convexity
/// modulus of phi itself; formulas that need the modulus of lambda*phi
/// multiply by lambda.
struct BoundConstants {
  std::optional<double> L_psi;
  std::optional<double> rho;
  std::optional<double> lambda;
  std::optional<double> L_eps;
  std::optional<int> N;
  /// Step of the weakly convex type-(f) bound (1 + tau/lambda); defaults to lambda.
  std::optional<double> tau;
};

/// Quality bound sigma(eps): sup ||g(x) - prox(x)|| <= sigma(eps).
double sigma_bound(ApproxKind kind, double eps, const BoundConstants& c);

/// (L, gamma) with ||g(x) - g(y)|| <= L ||x - y|| + gamma.
LipschitzPair lipschitz_pair(ApproxKind kind, double eps, const BoundConstants& c);

}  // namespace iprox
