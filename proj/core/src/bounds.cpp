#include "iprox/bounds.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "iprox/errors.hpp"

namespace iprox {

namespace {

template <class T>
T need(const std::optional<T>& v, const char* name, ApproxKind k) {
  if (!v) {
    throw std::invalid_argument("missing constant " + std::string(name) + " for kind " +
                                std::string(to_string(k)));
  }
  return *v;
}

// 1 - lambda*rho, the curvature margin of lambda*phi + ||.||^2/2.
double margin(ApproxKind k, const BoundConstants& c) {
  const double m = 1.0 - c.lambda.value_or(1.0) * need(c.rho, "rho", k);
  require(m > 0, "lambda * rho must be < 1");
  return m;
}

}  // namespace

std::string_view to_string(ApproxKind k) {
  switch (k) {
    case ApproxKind::a:
      return "a";
    case ApproxKind::b:
      return "b";
    case ApproxKind::c:
      return "c";
    case ApproxKind::d:
      return "d";
    case ApproxKind::e:
      return "e";
    case ApproxKind::f:
      return "f";
  }
  return "?";
}

ApproxKind approx_kind_from_string(std::string_view s) {
  for (auto k : {ApproxKind::a, ApproxKind::b, ApproxKind::c, ApproxKind::d, ApproxKind::e,
                 ApproxKind::f}) {
    if (to_string(k) == s) return k;
  }
  throw std::invalid_argument("unknown approximation kind '" + std::string(s) + "'");
}

double sigma_bound(ApproxKind kind, double eps, const BoundConstants& c) {
  require(eps >= 0, "eps must be nonnegative");
  switch (kind) {
    case ApproxKind::a:
      return eps;
    case ApproxKind::b:
      return need(c.L_psi, "L_psi", kind) * eps;
    case ApproxKind::c:
      return std::sqrt(eps / margin(kind, c));
    case ApproxKind::d:
      return 2.0 * std::sqrt(need(c.L_eps, "L_eps", kind) * eps);
    case ApproxKind::e:
      return std::sqrt(2.0 * need(c.L_psi, "L_psi", kind) * eps);
    case ApproxKind::f: {
      const double lam = need(c.lambda, "lambda", kind);
      const double gap = 1.0 / lam - need(c.rho, "rho", kind);
      require(gap > 0, "1/lambda - rho must be positive");
      return std::sqrt(need(c.N, "N", kind) * eps / gap);
    }
  }
  return 0.0;
}

LipschitzPair lipschitz_pair(ApproxKind kind, double eps, const BoundConstants& c) {
  require(eps >= 0, "eps must be nonnegative");
  switch (kind) {
    case ApproxKind::a:
      return {need(c.L_psi, "L_psi", kind), 2.0 * eps};
    case ApproxKind::b: {
      const double L = need(c.L_psi, "L_psi", kind);
      return {L, 2.0 * L * eps};
    }
    case ApproxKind::c: {
      const double m = margin(kind, c);
      return {1.0 / m, std::sqrt(2.0 * eps / m)};
    }
    case ApproxKind::d:
      return {need(c.L_eps, "L_eps", kind), 0.0};
    case ApproxKind::e: {
      const double L = need(c.L_psi, "L_psi", kind);
      return {L, std::sqrt(2.0 * L * eps)};
    }
    case ApproxKind::f: {
      const double rho = need(c.rho, "rho", kind);
      if (rho > 0) {
        const double lam = need(c.lambda, "lambda", kind);
        return {1.0 + c.tau.value_or(lam) / lam, 0.0};
      }
      return {need(c.L_psi, "L_psi", kind), 0.0};
    }
  }
  return {};
}

}  // namespace iprox
