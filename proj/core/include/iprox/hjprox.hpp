#pragma once

#include <cstdint>
#include <vector>

#include "iprox/penalty.hpp"
#include "iprox/types.hpp"

namespace iprox {

/// Parameters of the Gaussian-softmin (Cole-Hopf) estimator.
struct HJConfig {
  double lambda = 1.0;
  double eps = 0.1;
  long samples = 100000;
  std::uint64_t seed = 0;
  long block = 10000;
  /// Worker threads across blocks; results do not depend on it.
  int jobs = 1;
  /// Proposal search. Pilot passes start at temperature max(eps, anneal_from)
  /// and divide it by 4 down to eps, re-centring the Gaussian proposal on
  /// each pilot mean. pilot_samples = 0 samples N(x, eps*lambda I) directly.
  long pilot_samples = 1000;
  double anneal_from = 1.0;
  int top_passes = 3;
};

struct HJEstimate {
  Vec point;
  double ess = 0.0;
  Vec stderr_;
  long used = 0;
  long rejected = 0;

  double stderr_norm() const { return stderr_.norm(); }
};

/// Self-normalized estimate of E[y exp(-phi(y)/eps)] / E[exp(-phi(y)/eps)]
/// for y ~ N(x, eps*lambda I). The expectation is importance-sampled from
/// N(c, eps*lambda I) with c found by the pilot passes; without them the
/// weights degenerate once ||x - prox(x)|| >> sqrt(eps*lambda). Noise depends
/// on (seed, pass, block) only, so the same draws are reused for every x.
HJEstimate type_f_prox(const Penalty& p, const HJConfig& cfg, const Vec& x);

struct EnvelopeEstimate {
  double value = 0.0;
  double stderr_ = 0.0;
};

/// -eps log E[exp(-phi(y)/eps)], y ~ N(x, eps*lambda I).
EnvelopeEstimate viscous_envelope_value(const Penalty& p, const HJConfig& cfg, const Vec& x);

struct SigmaFReport {
  double max_gap = 0.0;
  double bound = 0.0;
  /// 3 * stderr at the point attaining the largest excess.
  double mc_slack = 0.0;
  double min_ess = 0.0;
  Vec witness;
  bool pass = false;
};

SigmaFReport sigma_f_check(const Penalty& p, const HJConfig& cfg, const std::vector<Vec>& cloud);

}  // namespace iprox
