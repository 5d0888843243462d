#pragma once

#include "iprox/penalty.hpp"
#include "iprox/types.hpp"

namespace iprox {

/// Brute-force minimization over a box, dim 1 or 2.
struct GridSpec {
  /// Box half-width; the box is centred at `center` (zero when empty).
  double radius = 10.0;
  Vec center;
  int n1 = 200000;
  int n2 = 700;
  bool refine = true;
};

struct GridMin {
  Vec argmin;
  double value = 0.0;
  /// Spacing of the coarse grid.
  double spacing = 0.0;
};

GridMin grid_minimize(const ScalarFn& f, int dim, const GridSpec& spec);

/// Grid minimizer of the proximal objective, box sized from p.domain_bound.
Vec grid_prox(const Penalty& p, double lambda, const Vec& y, GridSpec spec = {});
double grid_moreau(const Penalty& p, double lambda, const Vec& y, GridSpec spec = {});

struct InclusionCheck {
  bool holds = false;
  /// min over the box of phi(x) - phi(z) + rho/2 ||x-z||^2 + eps - <v, x-z>.
  double margin = 0.0;
  Vec witness;
  /// The margin sits within the resolution slack, so the verdict is fragile.
  bool coarse = false;
};

/// Checks v in d^rho_eps phi(z) by scanning the defining inequality.
InclusionCheck check_inclusion_eps_rho(const Penalty& p, const Vec& z, const Vec& v, double eps,
                                       double rho, GridSpec spec = {}, double tol = 1e-7);

}  // namespace iprox
