#include "iprox/grid_oracle.hpp"

#include <cmath>
#include <limits>

#include "iprox/errors.hpp"

namespace iprox {

namespace {

constexpr double kGolden = 0.6180339887498949;

void golden_1d(const ScalarFn& f, double a, double b, Vec& x, double& fx) {
  Vec t(1);
  auto g = [&](double s) {
    t[0] = s;
    return f(t);
  };
  double c = b - kGolden * (b - a);
  double d = a + kGolden * (b - a);
  double fc = g(c), fd = g(d);
  for (int it = 0; it < 200 && b - a > 1e-15 * (1.0 + std::abs(a)); ++it) {
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - kGolden * (b - a);
      fc = g(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + kGolden * (b - a);
      fd = g(d);
    }
  }
  const double m = 0.5 * (a + b);
  const double fm = g(m);
  if (fm < fx) {
    x[0] = m;
    fx = fm;
  }
}

// Repeated 21x21 zoom around the incumbent.
void zoom_2d(const ScalarFn& f, double h, Vec& x, double& fx) {
  Vec t(2);
  for (int round = 0; round < 40 && h > 1e-14; ++round) {
    const Vec c = x;
    const double step = h / 5.0;
    for (int i = -10; i <= 10; ++i) {
      for (int j = -10; j <= 10; ++j) {
        t << c[0] + i * step, c[1] + j * step;
        const double v = f(t);
        if (v < fx) {
          fx = v;
          x = t;
        }
      }
    }
    h = step;
  }
}

}  // namespace

GridMin grid_minimize(const ScalarFn& f, int dim, const GridSpec& spec) {
  require(dim == 1 || dim == 2, "grid oracles support dimension 1 or 2");
  const Vec c = spec.center.size() == dim ? spec.center : Vec::Zero(dim);
  const double r = spec.radius;
  GridMin out;
  out.value = std::numeric_limits<double>::infinity();
  Vec t(dim);
  if (dim == 1) {
    const int n = spec.n1;
    const double h = 2.0 * r / (n - 1);
    out.spacing = h;
    int best = 0;
    for (int i = 0; i < n; ++i) {
      t[0] = c[0] - r + i * h;
      const double v = f(t);
      if (v < out.value) {
        out.value = v;
        best = i;
      }
    }
    out.argmin = Vec::Constant(1, c[0] - r + best * h);
    if (spec.refine) golden_1d(f, out.argmin[0] - h, out.argmin[0] + h, out.argmin, out.value);
  } else {
    const int n = spec.n2;
    const double h = 2.0 * r / (n - 1);
    out.spacing = h;
    out.argmin = c;
    for (int i = 0; i < n; ++i) {
      t[0] = c[0] - r + i * h;
      for (int j = 0; j < n; ++j) {
        t[1] = c[1] - r + j * h;
        const double v = f(t);
        if (v < out.value) {
          out.value = v;
          out.argmin = t;
        }
      }
    }
    if (spec.refine) zoom_2d(f, h, out.argmin, out.value);
  }
  return out;
}

Vec grid_prox(const Penalty& p, double lambda, const Vec& y, GridSpec spec) {
  spec.radius = std::max(spec.radius, p.domain_bound);
  auto f = [&](const Vec& x) { return prox_objective(p, lambda, y, x); };
  return grid_minimize(f, p.dim, spec).argmin;
}

double grid_moreau(const Penalty& p, double lambda, const Vec& y, GridSpec spec) {
  spec.radius = std::max(spec.radius, p.domain_bound);
  auto f = [&](const Vec& x) { return prox_objective(p, lambda, y, x); };
  return grid_minimize(f, p.dim, spec).value;
}

InclusionCheck check_inclusion_eps_rho(const Penalty& p, const Vec& z, const Vec& v, double eps,
                                       double rho, GridSpec spec, double tol) {
  require_dim(z.size(), p.dim, "check_inclusion_eps_rho");
  require_dim(v.size(), p.dim, "check_inclusion_eps_rho");
  const double fz = eval(p, z);
  auto slack = [&](const Vec& x) {
    const Vec d = x - z;
    return eval(p, x) - fz + 0.5 * rho * d.squaredNorm() + eps - v.dot(d);
  };
  GridMin m = grid_minimize(slack, p.dim, spec);
  InclusionCheck out;
  out.margin = m.value;
  out.witness = m.argmin;
  out.holds = m.value >= -tol;
  // After refinement the residual uncertainty is far below the spacing;
  // without it the slack can hide a dip of order (Lipschitz * spacing).
  const double lip = v.norm() + p.weight + rho * spec.radius + 1.0;
  const double resolution = spec.refine ? tol : lip * m.spacing;
  out.coarse = std::abs(m.value) < resolution;
  return out;
}

}  // namespace iprox
