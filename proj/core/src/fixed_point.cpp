#include "iprox/fixed_point.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Eigenvalues>

#include "iprox/errors.hpp"
#include "iprox/rng.hpp"

namespace iprox {

FixedPointResult fixed_point_solve(const VecMap& op, const Vec& x0, const FixedPointOptions& opts) {
  require(opts.tol > 0, "fixed-point tolerance must be positive");
  FixedPointResult out;
  Vec x = x0;
  Vec tx = op(x);
  double r = (tx - x).norm();
  double theta = 1.0;
  int it = 0;
  while (it < opts.max_iter) {
    if (!std::isfinite(r)) {
      out.reason = "non-finite residual";
      break;
    }
    if (r <= opts.tol) {
      out.converged = true;
      out.reason = "converged";
      break;
    }
    ++it;
    Vec cand = (1.0 - theta) * x + theta * tx;
    Vec tcand = op(cand);
    const double rc = (tcand - cand).norm();
    if (rc > r && theta > opts.theta_floor) {
      theta = std::max(theta / 2.0, opts.theta_floor);
      continue;
    }
    x = std::move(cand);
    tx = std::move(tcand);
    r = rc;
    if (x.norm() > opts.divergence) {
      out.reason = "iterate norm exceeded divergence guard";
      break;
    }
  }
  if (out.reason.empty()) out.reason = "iteration budget exhausted";
  out.x = std::move(x);
  out.residual = r;
  out.iterations = it;
  return out;
}

NonexistenceCertificate certify_no_fixed_point(const VecMap& op, int dim, std::uint64_t seed,
                                               int starts, double radius,
                                               const FixedPointOptions& opts) {
  NonexistenceCertificate c;
  c.starts = starts;
  for (const Vec& x0 : box_cloud(seed, dim, starts, radius)) {
    if (!fixed_point_solve(op, x0, opts).converged) ++c.failed_starts;
  }
  c.min_grid_residual = std::numeric_limits<double>::infinity();
  if (dim == 1 || dim == 2) {
    const int n = dim == 1 ? 2001 : 101;
    const double h = 2.0 * radius / (n - 1);
    Vec x(dim);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < (dim == 2 ? n : 1); ++j) {
        x[0] = -radius + i * h;
        if (dim == 2) x[1] = -radius + j * h;
        c.min_grid_residual = std::min(c.min_grid_residual, (op(x) - x).norm());
      }
    }
  }
  c.no_fixed_point = c.failed_starts == starts && c.min_grid_residual > opts.tol;
  return c;
}

double spectral_radius_at(const VecMap& op, const Vec& x, double h) {
  require(h > 0, "finite-difference step must be positive");
  const Eigen::Index n = x.size();
  Eigen::MatrixXd J(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    Vec xp = x, xm = x;
    xp[j] += h;
    xm[j] -= h;
    J.col(j) = (op(xp) - op(xm)) / (2.0 * h);
  }
  if (!J.allFinite()) throw DivergenceError("non-finite finite-difference Jacobian");
  Eigen::EigenSolver<Eigen::MatrixXd> es(J, false);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

}  // namespace iprox
