#include "iprox/hjprox.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <limits>
#include <thread>

#include "iprox/bounds.hpp"
#include "iprox/errors.hpp"
#include "iprox/rng.hpp"

namespace iprox {

namespace {

// Per-block sums with weights exp(l_i - shift). Moments are taken about the
// sampling centre x to limit cancellation.
struct BlockSums {
  double shift = -std::numeric_limits<double>::infinity();
  double s0 = 0.0;
  double s2 = 0.0;
  Vec s1;
  Vec s2d;
  Vec s2dd;
  long used = 0;
  long rejected = 0;
};

void validate(const Penalty& p, const HJConfig& cfg, const Vec& x) {
  require_dim(x.size(), p.dim, "type_f_prox");
  require(cfg.lambda > 0, "HJ lambda must be positive");
  require(cfg.eps > 0, "HJ eps must be positive");
  require(cfg.samples > 0 && cfg.block > 0, "HJ samples and block must be positive");
  require(1.0 / cfg.lambda - p.rho() > 0, "HJ requires 1/lambda - rho > 0");
  require(cfg.pilot_samples >= 0 && cfg.top_passes >= 0 && cfg.anneal_from > 0,
          "HJ pilot settings must be non-negative");
}

template <class Fn>
std::vector<BlockSums> run_blocks(long samples, long block, int jobs, Fn&& fill) {
  const long nblocks = (samples + block - 1) / block;
  std::vector<BlockSums> out(static_cast<std::size_t>(nblocks));
  jobs = std::max(1, std::min<int>(jobs, static_cast<int>(nblocks)));
  if (jobs == 1) {
    for (long b = 0; b < nblocks; ++b) fill(b, out[static_cast<std::size_t>(b)]);
    return out;
  }
  std::vector<std::thread> pool;
  for (int w = 0; w < jobs; ++w) {
    pool.emplace_back([&, w] {
      for (long b = w; b < nblocks; b += jobs) fill(b, out[static_cast<std::size_t>(b)]);
    });
  }
  for (auto& t : pool) t.join();
  return out;
}

// Column i holds the offset of sample i.
void fill_normal(Rng& rng, Eigen::MatrixXd& dev, double scale) {
  std::normal_distribution<double> nd;
  for (Eigen::Index i = 0; i < dev.cols(); ++i) {
    for (Eigen::Index j = 0; j < dev.rows(); ++j) dev(j, i) = scale * nd(rng);
  }
}

struct PassResult {
  Vec point;
  Vec stderr_;
  double ess = 0.0;
  long used = 0;
  long rejected = 0;
  /// log of the mean weight, i.e. log E[exp(-phi(y)/temp)] under N(x, temp*lambda I).
  double log_mean_w = 0.0;
  /// Relative standard error of the mean weight.
  double rel_se = 0.0;
};

// One importance-sampled pass at temperature `temp`: draws y ~ N(c, temp*lambda I)
// and weights them by exp(-phi(y)/temp) N(y; x) / N(y; c).
PassResult run_pass(const Penalty& p, const HJConfig& cfg, const Vec& x, const Vec& c, double temp,
                    long samples, std::uint64_t seed) {
  const int n = p.dim;
  const double scale = std::sqrt(temp * cfg.lambda);
  const double inv2v = 1.0 / (2.0 * temp * cfg.lambda);
  const Vec offset = c - x;
  const bool centred = offset.squaredNorm() == 0.0;

  auto fill = [&](long b, BlockSums& s) {
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(b)));
    const long len = std::min(cfg.block, samples - b * cfg.block);
    std::vector<double> logw(static_cast<std::size_t>(len));
    Eigen::MatrixXd dev(n, len);
    fill_normal(rng, dev, scale);
    Vec y(n);
    for (long i = 0; i < len; ++i) {
      y = c + dev.col(i);
      double l = -eval(p, y) / temp;
      if (!centred) l -= ((offset + dev.col(i)).squaredNorm() - dev.col(i).squaredNorm()) * inv2v;
      logw[i] = l;
      if (std::isfinite(l)) s.shift = std::max(s.shift, l);
    }
    s.s1 = Vec::Zero(n);
    s.s2d = Vec::Zero(n);
    s.s2dd = Vec::Zero(n);
    for (long i = 0; i < len; ++i) {
      if (!std::isfinite(logw[i])) {
        ++s.rejected;
        continue;
      }
      ++s.used;
      const double w = std::exp(logw[i] - s.shift);
      s.s0 += w;
      s.s2 += w * w;
      s.s1 += w * dev.col(i);
      s.s2d += (w * w) * dev.col(i);
      s.s2dd += (w * w) * dev.col(i).cwiseProduct(dev.col(i));
    }
  };
  std::vector<BlockSums> blocks = run_blocks(samples, cfg.block, cfg.jobs, fill);

  double shift = -std::numeric_limits<double>::infinity();
  PassResult r;
  for (const auto& b : blocks) {
    shift = std::max(shift, b.shift);
    r.used += b.used;
    r.rejected += b.rejected;
  }
  if (r.used == 0) throw DivergenceError("no finite samples in Gaussian softmin estimate");
  double s0 = 0.0, s2 = 0.0;
  Vec s1 = Vec::Zero(n), s2d = Vec::Zero(n), s2dd = Vec::Zero(n);
  for (const auto& b : blocks) {
    if (b.used == 0) continue;
    const double f = std::exp(b.shift - shift);
    s0 += f * b.s0;
    s1 += f * b.s1;
    s2 += f * f * b.s2;
    s2d += (f * f) * b.s2d;
    s2dd += (f * f) * b.s2dd;
  }
  // The max-shifted weight of the best sample is exactly 1, so s0 >= 1.
  assert(s0 >= 1.0);
  const Vec mean_dev = s1 / s0;
  r.point = c + mean_dev;
  const Vec var =
      (s2dd - 2.0 * mean_dev.cwiseProduct(s2d) + mean_dev.cwiseProduct(mean_dev) * s2) / (s0 * s0);
  r.stderr_ = var.cwiseMax(0.0).cwiseSqrt();
  r.ess = s0 * s0 / s2;
  const double m = static_cast<double>(r.used);
  const double mean = s0 / m;
  r.log_mean_w = shift + std::log(mean);
  r.rel_se = std::sqrt(std::max(s2 / m - mean * mean, 0.0) / m) / mean;
  return r;
}

// Below this temperature phi(c + dev) - phi(c) is dominated by rounding, so
// further pilot passes cannot move the centre.
constexpr double kMinPilotTemp = 1e-20;

// Proposal centre from the annealed pilot passes.
Vec proposal_center(const Penalty& p, const HJConfig& cfg, const Vec& x) {
  if (cfg.pilot_samples <= 0) return x;
  const long ps = std::min(cfg.pilot_samples, cfg.samples);
  const double floor = std::max(cfg.eps, kMinPilotTemp);
  double temp = std::max(floor, cfg.anneal_from);
  Vec c = x;
  std::uint64_t pass = 0;
  for (int i = 0; i < cfg.top_passes; ++i)
    c = run_pass(p, cfg, x, c, temp, ps, derive_seed(cfg.seed, 0x9170 + pass++)).point;
  while (temp > floor) {
    temp = std::max(floor, temp / 4.0);
    c = run_pass(p, cfg, x, c, temp, ps, derive_seed(cfg.seed, 0x9170 + pass++)).point;
  }
  return c;
}

}  // namespace

HJEstimate type_f_prox(const Penalty& p, const HJConfig& cfg, const Vec& x) {
  validate(p, cfg, x);
  const PassResult r =
      run_pass(p, cfg, x, proposal_center(p, cfg, x), cfg.eps, cfg.samples, cfg.seed);
  HJEstimate est;
  est.point = r.point;
  est.stderr_ = r.stderr_;
  est.ess = r.ess;
  est.used = r.used;
  est.rejected = r.rejected;
  return est;
}

EnvelopeEstimate viscous_envelope_value(const Penalty& p, const HJConfig& cfg, const Vec& x) {
  validate(p, cfg, x);
  const PassResult r =
      run_pass(p, cfg, x, proposal_center(p, cfg, x), cfg.eps, cfg.samples, cfg.seed);
  EnvelopeEstimate out;
  out.value = -cfg.eps * r.log_mean_w;
  out.stderr_ = cfg.eps * r.rel_se;
  return out;
}

SigmaFReport sigma_f_check(const Penalty& p, const HJConfig& cfg, const std::vector<Vec>& cloud) {
  BoundConstants c;
  c.lambda = cfg.lambda;
  c.rho = p.rho();
  c.N = p.dim;
  SigmaFReport r;
  r.bound = sigma_bound(ApproxKind::f, cfg.eps, c);
  r.min_ess = std::numeric_limits<double>::infinity();
  r.pass = true;
  double worst_excess = -std::numeric_limits<double>::infinity();
  for (const Vec& x : cloud) {
    const HJEstimate est = type_f_prox(p, cfg, x);
    const double gap = (est.point - prox_exact(p, cfg.lambda, x)).norm();
    const double slack = 3.0 * est.stderr_norm();
    r.max_gap = std::max(r.max_gap, gap);
    r.min_ess = std::min(r.min_ess, est.ess);
    const double excess = gap - (r.bound + slack);
    if (excess > worst_excess) {
      worst_excess = excess;
      r.mc_slack = slack;
      r.witness = x;
    }
    if (excess > 0) r.pass = false;
  }
  return r;
}

}  // namespace iprox
