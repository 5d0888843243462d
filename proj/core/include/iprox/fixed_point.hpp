#pragma once

#include <cstdint>
#include <string>

#include "iprox/types.hpp"

namespace iprox {

struct FixedPointOptions {
  double tol = 1e-10;
  int max_iter = 100000;
  double theta_floor = 1.0 / 64.0;
  double divergence = 1e9;
};

struct FixedPointResult {
  Vec x;
  double residual = 0.0;
  int iterations = 0;
  bool converged = false;
  std::string reason;
};

/// Damped iteration x <- (1 - theta) x + theta op(x); theta starts at 1 and
/// halves (down to the floor) whenever a step would increase the residual.
FixedPointResult fixed_point_solve(const VecMap& op, const Vec& x0,
                                   const FixedPointOptions& opts = {});

struct NonexistenceCertificate {
  bool no_fixed_point = false;
  int failed_starts = 0;
  int starts = 0;
  /// min over a coarse grid of ||op(x) - x||.
  double min_grid_residual = 0.0;
};

/// Solver failure from `starts` seeded points in [-radius, radius]^dim plus a
/// residual sweep over a coarse grid (dim <= 2).
NonexistenceCertificate certify_no_fixed_point(const VecMap& op, int dim, std::uint64_t seed,
                                               int starts = 8, double radius = 10.0,
                                               const FixedPointOptions& opts = {});

/// Spectral radius of the central-difference Jacobian of op at x.
double spectral_radius_at(const VecMap& op, const Vec& x, double h = 1e-6);

}  // namespace iprox
