#include "iprox/penalty.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "iprox/errors.hpp"

namespace iprox {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
// Relative slack for conjugates that are indicators; absorbs the rounding of
// y - prox(y) landing a few ulps outside the dual ball.
constexpr double kIndicatorTol = 1e-12;

double sign(double v) { return v > 0 ? 1.0 : (v < 0 ? -1.0 : 0.0); }

// Curvature floor of the unshifted penalty: mu - rho.
double base_curvature(const Penalty& p) {
  switch (p.kind) {
    case PenaltyKind::sq_l2:
      return p.weight;
    case PenaltyKind::aniso_quad:
      return p.q.minCoeff();
    case PenaltyKind::mcp:
      return -1.0 / p.mcp_b;
    default:
      return 0.0;
  }
}

double mcp_scalar(double x, double lam, double b) {
  const double ax = std::abs(x);
  if (ax <= b * lam) return lam * ax - x * x / (2.0 * b);
  return 0.5 * b * lam * lam;
}

// Scalar prox of t*mcp + t*alpha x^2 at y. Both pieces are minimized in
// closed form, then compared; ties go to the smaller magnitude.
double mcp_prox_scalar(double y, double t, double lam, double b, double alpha) {
  const double s = y >= 0 ? 1.0 : -1.0;
  const double ay = std::abs(y);
  const double knot = b * lam;
  auto objective = [&](double x) {
    return t * (mcp_scalar(x, lam, b) + alpha * x * x) + 0.5 * (x - y) * (x - y);
  };
  const double curv_inner = 1.0 + 2.0 * t * alpha - t / b;
  double x1 = std::max(ay - t * lam, 0.0) / curv_inner;
  x1 = std::min(x1, knot);
  double x2 = std::max(ay / (1.0 + 2.0 * t * alpha), knot);
  const double f1 = objective(s * x1);
  const double f2 = objective(s * x2);
  if (f2 < f1) return s * x2;
  return s * x1;
}

// sup_x w x - h(x) for h(x) = lam_t*mcp(x) + (kappa/2) x^2, kappa >= lam_t/b.
double mcp_conjugate_scalar(double w, double t, double lam, double b, double kappa) {
  const double aw = std::abs(w);
  const double knot = b * lam;
  auto h = [&](double x) { return t * mcp_scalar(x, lam, b) + 0.5 * kappa * x * x; };
  const double curv_inner = kappa - t / b;
  double x1;
  if (curv_inner > 0) {
    x1 = std::clamp((aw - t * lam) / curv_inner, 0.0, knot);
  } else {
    x1 = aw > t * lam ? knot : 0.0;
  }
  const double x2 = std::max(aw / kappa, knot);
  return std::max(aw * x1 - h(x1), aw * x2 - h(x2));
}

void check_lambda(const Penalty& p, double lambda) {
  if (!(lambda > 0) || !std::isfinite(lambda)) {
    throw ConstraintError("prox parameter lambda must be positive and finite");
  }
  if (!(lambda < p.prox_bound())) {
    throw ConstraintError("lambda at or above the prox-bound of " + p.name());
  }
}

}  // namespace

void require(bool cond, const std::string& what) {
  if (!cond) throw ConstraintError(what);
}

void require_dim(long got, long expected, const char* where) {
  if (got != expected) {
    throw DimensionMismatch(std::string(where) + ": expected dimension " +
                            std::to_string(expected) + ", got " + std::to_string(got));
  }
}

std::string_view to_string(PenaltyKind k) {
  switch (k) {
    case PenaltyKind::sq_l2:
      return "sq_l2";
    case PenaltyKind::l2:
      return "l2";
    case PenaltyKind::l1:
      return "l1";
    case PenaltyKind::aniso_quad:
      return "aniso_quad";
    case PenaltyKind::constant:
      return "const";
    case PenaltyKind::mcp:
      return "mcp";
  }
  return "?";
}

PenaltyKind penalty_kind_from_string(std::string_view name) {
  for (auto k : {PenaltyKind::sq_l2, PenaltyKind::l2, PenaltyKind::l1, PenaltyKind::aniso_quad,
                 PenaltyKind::constant, PenaltyKind::mcp}) {
    if (to_string(k) == name) return k;
  }
  throw std::invalid_argument("unknown penalty '" + std::string(name) + "'");
}

Penalty Penalty::sq_l2(int dim, double gamma) {
  require(dim > 0, "dim must be positive");
  require(gamma > 0, "sq_l2 coefficient must be positive");
  Penalty p;
  p.kind = PenaltyKind::sq_l2;
  p.dim = dim;
  p.weight = gamma;
  return p;
}

Penalty Penalty::l2(int dim, double gamma) {
  require(dim > 0, "dim must be positive");
  require(gamma >= 0, "l2 weight must be nonnegative");
  Penalty p;
  p.kind = PenaltyKind::l2;
  p.dim = dim;
  p.weight = gamma;
  return p;
}

Penalty Penalty::l1(int dim, double gamma) {
  require(dim > 0, "dim must be positive");
  require(gamma >= 0, "l1 weight must be nonnegative");
  Penalty p;
  p.kind = PenaltyKind::l1;
  p.dim = dim;
  p.weight = gamma;
  return p;
}

Penalty Penalty::aniso_quad(Vec diag) {
  require(diag.size() > 0, "aniso_quad needs a nonempty diagonal");
  require(diag.minCoeff() > 0, "aniso_quad diagonal must be positive");
  Penalty p;
  p.kind = PenaltyKind::aniso_quad;
  p.dim = static_cast<int>(diag.size());
  p.q = std::move(diag);
  return p;
}

Penalty Penalty::constant(int dim, double c) {
  require(dim > 0, "dim must be positive");
  Penalty p;
  p.kind = PenaltyKind::constant;
  p.dim = dim;
  p.weight = c;
  return p;
}

Penalty Penalty::mcp(int dim, double lambda_mcp, double b) {
  require(dim > 0, "dim must be positive");
  require(lambda_mcp >= 0, "mcp lambda must be nonnegative");
  require(b > 0, "mcp b must be positive");
  Penalty p;
  p.kind = PenaltyKind::mcp;
  p.dim = dim;
  p.weight = lambda_mcp;
  p.mcp_b = b;
  return p;
}

Penalty Penalty::with_quadratic(double alpha) const {
  Penalty out = *this;
  out.shift += alpha;
  return out;
}

std::string Penalty::name() const { return std::string(to_string(kind)); }

// Curvatures within rounding of zero (e.g. mcp shifted by exactly 1/(2b))
// count as plain convex.
double Penalty::rho() const {
  const double k = base_curvature(*this) + 2.0 * shift;
  return k < -1e-14 ? -k : 0.0;
}

double Penalty::mu() const {
  const double k = base_curvature(*this) + 2.0 * shift;
  return k > 1e-14 ? k : 0.0;
}

double Penalty::prox_bound() const {
  const double r = rho();
  return r > 0 ? 1.0 / r : kInf;
}

double Penalty::min_value() const {
  if (kind == PenaltyKind::constant) return weight;
  return 0.0;
}

Vec Penalty::argmin() const { return Vec::Zero(dim); }

nlohmann::json Penalty::to_json() const {
  nlohmann::json j;
  j["name"] = name();
  j["dim"] = dim;
  switch (kind) {
    case PenaltyKind::aniso_quad:
      j["q"] = std::vector<double>(q.data(), q.data() + q.size());
      break;
    case PenaltyKind::mcp:
      j["lambda_mcp"] = weight;
      j["b"] = mcp_b;
      break;
    case PenaltyKind::constant:
      j["c"] = weight;
      break;
    default:
      j["gamma"] = weight;
  }
  if (shift != 0.0) j["shift"] = shift;
  j["rho"] = rho();
  return j;
}

ProxConstants prox_constants(const Penalty& p, double lambda) {
  check_lambda(p, lambda);
  ProxConstants c;
  c.lambda = lambda;
  c.rho = lambda * p.rho();
  c.mu = lambda * p.mu();
  c.L_psi = c.mu > 0 ? 1.0 / (1.0 + c.mu) : 1.0 / (1.0 - c.rho);
  return c;
}

double eval(const Penalty& p, const Vec& x) {
  require_dim(x.size(), p.dim, "eval");
  double v = 0.0;
  switch (p.kind) {
    case PenaltyKind::sq_l2:
      v = 0.5 * p.weight * x.squaredNorm();
      break;
    case PenaltyKind::l2:
      v = p.weight * x.norm();
      break;
    case PenaltyKind::l1:
      v = p.weight * x.lpNorm<1>();
      break;
    case PenaltyKind::aniso_quad:
      v = 0.5 * (p.q.array() * x.array().square()).sum();
      break;
    case PenaltyKind::constant:
      v = p.weight;
      break;
    case PenaltyKind::mcp:
      for (double xi : x) v += mcp_scalar(xi, p.weight, p.mcp_b);
      break;
  }
  return v + p.shift * x.squaredNorm();
}

Vec prox_exact(const Penalty& p, double lambda, const Vec& y) {
  require_dim(y.size(), p.dim, "prox_exact");
  check_lambda(p, lambda);
  const double a = p.shift;
  switch (p.kind) {
    case PenaltyKind::sq_l2:
      return y / (1.0 + lambda * (p.weight + 2.0 * a));
    case PenaltyKind::aniso_quad:
      return (y.array() / (1.0 + lambda * (p.q.array() + 2.0 * a))).matrix();
    case PenaltyKind::l1: {
      const double t = lambda * p.weight;
      Vec out(y.size());
      for (Eigen::Index i = 0; i < y.size(); ++i) {
        out[i] = sign(y[i]) * std::max(std::abs(y[i]) - t, 0.0);
      }
      return out / (1.0 + 2.0 * lambda * a);
    }
    case PenaltyKind::l2: {
      const double t = lambda * p.weight;
      const double n = y.norm();
      if (n <= t) return Vec::Zero(y.size());
      return (1.0 - t / n) * y / (1.0 + 2.0 * lambda * a);
    }
    case PenaltyKind::constant:
      return y / (1.0 + 2.0 * lambda * a);
    case PenaltyKind::mcp: {
      Vec out(y.size());
      for (Eigen::Index i = 0; i < y.size(); ++i) {
        out[i] = mcp_prox_scalar(y[i], lambda, p.weight, p.mcp_b, a);
      }
      return out;
    }
  }
  return y;
}

double prox_objective(const Penalty& p, double lambda, const Vec& y, const Vec& x) {
  return eval(p, x) + (x - y).squaredNorm() / (2.0 * lambda);
}

double moreau_envelope(const Penalty& p, double lambda, const Vec& y) {
  return prox_objective(p, lambda, y, prox_exact(p, lambda, y));
}

double psi_potential(const Penalty& p, const Vec& y, double lambda) {
  return 0.5 * y.squaredNorm() - lambda * moreau_envelope(p, lambda, y);
}

double convexified_value(const Penalty& p, double lambda, double c, const Vec& x) {
  return lambda * eval(p, x) + 0.5 * c * x.squaredNorm();
}

double convexified_conjugate(const Penalty& p, double lambda, double c, const Vec& w) {
  require_dim(w.size(), p.dim, "convexified_conjugate");
  require(c + 1e-15 >= lambda * p.rho(), "convexification constant too small");
  const double a = p.shift;
  // Quadratic coefficient common to every kind: lambda*2*alpha + c.
  const double kappa = 2.0 * lambda * a + c;
  switch (p.kind) {
    case PenaltyKind::sq_l2:
    case PenaltyKind::aniso_quad: {
      Vec k = p.kind == PenaltyKind::sq_l2 ? Vec::Constant(p.dim, lambda * p.weight + kappa)
                                           : (lambda * p.q.array() + kappa).matrix().eval();
      return 0.5 * (w.array().square() / k.array()).sum();
    }
    case PenaltyKind::l1: {
      const double t = lambda * p.weight;
      if (kappa <= 0) return w.lpNorm<Eigen::Infinity>() <= t * (1.0 + kIndicatorTol) ? 0.0 : kInf;
      double s = 0.0;
      for (double wi : w) {
        const double e = std::max(std::abs(wi) - t, 0.0);
        s += e * e;
      }
      return s / (2.0 * kappa);
    }
    case PenaltyKind::l2: {
      const double t = lambda * p.weight;
      const double e = std::max(w.norm() - t, 0.0);
      if (kappa <= 0) return e <= t * kIndicatorTol ? 0.0 : kInf;
      return e * e / (2.0 * kappa);
    }
    case PenaltyKind::constant: {
      const double off = lambda * p.weight;
      if (kappa <= 0) return w.norm() <= kIndicatorTol ? -off : kInf;
      return w.squaredNorm() / (2.0 * kappa) - off;
    }
    case PenaltyKind::mcp: {
      double s = 0.0;
      for (double wi : w) s += mcp_conjugate_scalar(wi, lambda, p.weight, p.mcp_b, kappa);
      return s;
    }
  }
  return kInf;
}

double inclusion_gap(const Penalty& p, double lambda, const Vec& z, const Vec& v) {
  require_dim(z.size(), p.dim, "inclusion_gap");
  require_dim(v.size(), p.dim, "inclusion_gap");
  // With h = lambda phi + (r/2)||.||^2 convex, the sup equals
  // h(z) + h*(v + r z) - <v + r z, z>.
  const double r = lambda * p.rho();
  const Vec w = v + r * z;
  const double hs = convexified_conjugate(p, lambda, r, w);
  if (!std::isfinite(hs)) return kInf;
  const double gap = convexified_value(p, lambda, r, z) + hs - w.dot(z);
  return std::max(gap, 0.0);
}

double psi_subgradient_gap(const Penalty& p, double lambda, const Vec& y, const Vec& s) {
  require_dim(y.size(), p.dim, "psi_subgradient_gap");
  require_dim(s.size(), p.dim, "psi_subgradient_gap");
  const double gap =
      psi_potential(p, y, lambda) + convexified_value(p, lambda, 1.0, s) - s.dot(y);
  return std::max(gap, 0.0);
}

double subdifferential_distance(const Penalty& p, const Vec& x, const Vec& v) {
  require_dim(x.size(), p.dim, "subdifferential_distance");
  require_dim(v.size(), p.dim, "subdifferential_distance");
  const Vec r = v - 2.0 * p.shift * x;
  switch (p.kind) {
    case PenaltyKind::sq_l2:
      return (r - p.weight * x).norm();
    case PenaltyKind::aniso_quad:
      return (r.array() - p.q.array() * x.array()).matrix().norm();
    case PenaltyKind::constant:
      return r.norm();
    case PenaltyKind::l2: {
      const double n = x.norm();
      if (n == 0.0) return std::max(r.norm() - p.weight, 0.0);
      return (r - p.weight * x / n).norm();
    }
    case PenaltyKind::l1:
    case PenaltyKind::mcp: {
      double s = 0.0;
      for (Eigen::Index i = 0; i < x.size(); ++i) {
        double d;
        if (x[i] == 0.0) {
          d = std::max(std::abs(r[i]) - p.weight, 0.0);
        } else if (p.kind == PenaltyKind::l1) {
          d = r[i] - p.weight * sign(x[i]);
        } else if (std::abs(x[i]) < p.mcp_b * p.weight) {
          d = r[i] - (p.weight * sign(x[i]) - x[i] / p.mcp_b);
        } else {
          d = r[i];
        }
        s += d * d;
      }
      return std::sqrt(s);
    }
  }
  return kInf;
}

ConvexSet eps_subdifferential(const Penalty& p, double eps, const Vec& x) {
  require_dim(x.size(), p.dim, "eps_subdifferential");
  require(eps >= 0, "eps must be nonnegative");
  switch (p.kind) {
    case PenaltyKind::sq_l2: {
      // {g x + w : ||w||^2 <= 2 g eps} for phi = (g/2)||x||^2.
      const double g = p.weight + 2.0 * p.shift;
      return ConvexSet::ball(g * x, std::sqrt(2.0 * g * eps));
    }
    case PenaltyKind::l1: {
      if (p.dim != 1 || p.shift != 0.0) break;
      const double g = p.weight;
      const double xv = x[0];
      Vec a(1), b(1);
      if (xv > 0) {
        a[0] = std::max(-g, g - eps / xv);
        b[0] = g;
      } else if (xv < 0) {
        a[0] = -g;
        b[0] = std::min(g, -g + eps / (-xv));
      } else {
        a[0] = -g;
        b[0] = g;
      }
      return ConvexSet::segment(a, b);
    }
    case PenaltyKind::l2: {
      if (p.shift != 0.0) break;
      const double g = p.weight;
      const double n = x.norm();
      Vec c = Vec::Zero(p.dim);
      // <s, x/||x||> >= g - eps/||x||; vacuous once the offset drops below -g.
      if (n == 0.0 || g - eps / n <= -g) return ConvexSet::ball(c, g);
      return ConvexSet::cap(c, g, x / n, g - eps / n);
    }
    default:
      break;
  }
  throw NoClosedForm("no closed-form eps-subdifferential for " + p.name());
}

TransferPair prox_scaling_transfer(const Penalty& p, double gamma, double alpha, const Vec& z) {
  require(gamma > 0, "gamma must be positive");
  require(alpha > 0, "alpha must be positive");
  const double c = 2.0 * alpha * gamma + 1.0;
  TransferPair out;
  out.lhs = prox_exact(p.with_quadratic(alpha), gamma, z);
  out.rhs = prox_exact(p, gamma / c, z / c);
  return out;
}

WeakSplit weakly_convex_split(const Penalty& p, double gamma) {
  const double r = p.rho();
  require(gamma > 0 && (r == 0.0 || gamma < 1.0 / r), "gamma must lie in (0, 1/rho)");
  WeakSplit s;
  s.rho = r;
  s.smooth_grad = [r](const Vec& x) -> Vec { return r * x; };
  s.convex_part = r > 0 ? p.with_quadratic(0.5 * r) : p;
  s.step = [cp = s.convex_part, r, gamma](const Vec& x) -> Vec {
    return prox_exact(cp, gamma, x - gamma * r * x);
  };
  return s;
}

}  // namespace iprox
