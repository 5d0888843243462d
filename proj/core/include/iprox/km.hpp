#pragma once

#include <optional>
#include <string>
#include <vector>

#include "iprox/iteration.hpp"

namespace iprox {

/// Parameters of the inertial Krasnosel'skii-Mann iteration
///   y_k = x_k + alpha_k (x_k - x_{k-1}) + eps_k
///   z_k = x_k + beta_k (x_k - x_{k-1}) + rho_k
///   x_{k+1} = (1 - lambda_k) y_k + lambda_k T z_k + theta_k
/// Sequences cover k = 1..K (entry k-1 of each vector) and x_0 = x_1. The
/// error callbacks receive k; unset callbacks mean zero error.
struct KMParams {
  std::vector<double> alpha;
  std::vector<double> beta;
  std::vector<double> lambda;
  std::function<Vec(int)> eps_k;
  std::function<Vec(int)> rho_k;
  std::function<Vec(int)> theta_k;

  static KMParams constant(int K, double alpha, double beta, double lambda);
};

struct KMReport {
  bool valid = false;
  double alpha_inf = 0.0;
  double alpha_sup = 0.0;
  double mu_sup = 0.0;
  double lambda_inf = 0.0;
  double lambda_sup = 0.0;
  /// mu_k = (1 - lambda_k) alpha_k + lambda_k beta_k.
  /// sup over 2 <= k <= K of the compatibility expression; must be negative.
  double compatibility = 0.0;
  std::vector<std::string> violations;
};

KMReport validate_km_params(const KMParams& p, int K);

Trace km_run(const VecMap& T, const KMParams& p, const Vec& x0, int K,
             const std::optional<Vec>& target = std::nullopt);

}  // namespace iprox
