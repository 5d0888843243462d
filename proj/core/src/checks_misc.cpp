#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "checks.hpp"
#include "iprox/errors.hpp"
#include "iprox/fixed_point.hpp"
#include "iprox/grid_oracle.hpp"
#include "iprox/rng.hpp"

namespace iprox {

namespace checks {

void finish(CheckRecord& r, bool ok) {
  r.status = ok ? CheckStatus::pass : CheckStatus::fail;
  if (!ok && r.witness.size() == 0) {
    r.witness = r.measured.empty() ? Vec::Zero(1)
                                   : Vec(Eigen::Map<const Vec>(r.measured.data(),
                                                               static_cast<Eigen::Index>(r.measured.size())));
  }
}

CheckRecord skipped(std::string note) {
  CheckRecord r;
  r.status = CheckStatus::skipped;
  r.note = std::move(note);
  return r;
}

std::vector<double> to_vector(const Vec& v) { return {v.data(), v.data() + v.size()}; }

namespace {

std::vector<Penalty> catalog() {
  return {Penalty::sq_l2(2, 1.0),       Penalty::l2(2, 1.0),         Penalty::l1(2, 1.0),
          Penalty::aniso_quad(Vec::LinSpaced(2, 0.5, 2.0)), Penalty::constant(2, 1.0),
          Penalty::mcp(2, 1.0, 2.0),    Penalty::l1(1, 1.0),         Penalty::mcp(1, 1.0, 2.0)};
}

// Within `band` of a point where prox_{lambda phi} has a kink.
bool near_kink(const Penalty& p, double lambda, const Vec& y, double band) {
  switch (p.kind) {
    case PenaltyKind::l2:
      return std::abs(y.norm() - lambda * p.weight) < band;
    case PenaltyKind::l1:
      return ((y.array().abs() - lambda * p.weight).abs() < band).any();
    case PenaltyKind::mcp:
      return ((y.array().abs() - lambda * p.weight).abs() < band).any() ||
             ((y.array().abs() - p.mcp_b * p.weight).abs() < band).any();
    default:
      return false;
  }
}

}  // namespace

CheckRecord prox_lipschitz(std::uint64_t seed) {
  CheckRecord r;
  bool ok = true;
  int idx = 0;
  for (const Penalty& p : catalog()) {
    const double L = prox_constants(p, 1.0).L_psi;
    const auto xs = box_cloud(derive_seed(seed, 2 * idx), p.dim, 200, 5.0);
    const auto ys = box_cloud(derive_seed(seed, 2 * idx + 1), p.dim, 200, 5.0);
    double worst = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      const double d = (xs[i] - ys[i]).norm();
      const double ratio = (prox_exact(p, 1.0, xs[i]) - prox_exact(p, 1.0, ys[i])).norm() / d;
      worst = std::max(worst, ratio);
      if (ratio > L * (1.0 + 1e-12)) {
        ok = false;
        r.witness = xs[i];
      }
    }
    r.measured.push_back(worst);
    r.bound.push_back(L);
    r.config["penalties"].push_back(p.name());
    ++idx;
  }
  finish(r, ok);
  return r;
}

CheckRecord first_order(std::uint64_t seed) {
  CheckRecord r;
  bool ok = true;
  double worst_incl = 0.0, worst_grid = 0.0;
  int idx = 0;
  for (const Penalty& p : catalog()) {
    const double lambda = 1.0;
    const int count = p.dim == 1 ? 20 : 6;
    for (const Vec& y : box_cloud(derive_seed(seed, idx++), p.dim, count, 4.0)) {
      const Vec z = prox_exact(p, lambda, y);
      const double incl = subdifferential_distance(p, z, (y - z) / lambda);
      const double grid = (grid_prox(p, lambda, y) - z).norm();
      worst_incl = std::max(worst_incl, incl);
      worst_grid = std::max(worst_grid, grid);
      if (incl > 1e-9 || grid > 1e-5) {
        ok = false;
        r.witness = y;
      }
    }
    r.config["penalties"].push_back(p.name());
  }
  r.measured = {worst_incl, worst_grid};
  r.bound = {1e-9, 1e-5};
  finish(r, ok);
  return r;
}

CheckRecord moreau_grid(std::uint64_t seed) {
  CheckRecord r;
  bool ok = true;
  double worst = 0.0;
  int idx = 0;
  for (const Penalty& p : catalog()) {
    const int count = p.dim == 1 ? 20 : 6;
    for (const Vec& y : box_cloud(derive_seed(seed, 100 + idx++), p.dim, count, 4.0)) {
      const double d = std::abs(moreau_envelope(p, 1.0, y) - grid_moreau(p, 1.0, y));
      worst = std::max(worst, d);
      if (d > 1e-6) {
        ok = false;
        r.witness = y;
      }
    }
    // At a minimizer the envelope equals the minimum.
    const double m = std::abs(moreau_envelope(p, 1.0, p.argmin()) - p.min_value());
    worst = std::max(worst, m);
    if (m > 1e-12) ok = false;
  }
  r.measured = {worst};
  r.bound = {1e-6};
  finish(r, ok);
  return r;
}

CheckRecord potential_gradient(std::uint64_t seed) {
  CheckRecord r;
  bool ok = true;
  double worst = 0.0;
  const double h = 1e-5;
  int idx = 0;
  for (const Penalty& p : catalog()) {
    for (const Vec& y : box_cloud(derive_seed(seed, idx++), p.dim, 100, 4.0)) {
      if (near_kink(p, 1.0, y, 1e-3)) continue;
      Vec g(p.dim);
      for (int i = 0; i < p.dim; ++i) {
        Vec a = y, b = y;
        a[i] += h;
        b[i] -= h;
        g[i] = (psi_potential(p, a) - psi_potential(p, b)) / (2.0 * h);
      }
      const double d = (g - prox_exact(p, 1.0, y)).norm();
      worst = std::max(worst, d);
      if (d > 1e-4) {
        ok = false;
        r.witness = y;
      }
    }
  }
  r.measured = {worst};
  r.bound = {1e-4};
  finish(r, ok);
  return r;
}

CheckRecord potential_ball(std::uint64_t seed) {
  CheckRecord r;
  bool ok = true;
  const double eps = 0.1;
  int idx = 0;
  for (const Penalty& p : {Penalty::sq_l2(2, 1.0), Penalty::l1(1, 1.0), Penalty::l2(2, 1.0),
                           Penalty::mcp(1, 1.0, 2.0)}) {
    const double radius = std::sqrt(2.0 * prox_constants(p, 1.0).L_psi * eps);
    double worst = 0.0;
    Rng rng(derive_seed(seed, 50 + idx));
    for (const Vec& y : box_cloud(derive_seed(seed, idx), p.dim, 20, 4.0)) {
      const Vec grad = prox_exact(p, 1.0, y);
      for (int k = 0; k < 32; ++k) {
        const Vec u = unit_direction(rng, p.dim);
        const double ext = psi_eps_support(p, 1.0, eps, y, u) - grad.dot(u);
        worst = std::max(worst, ext);
        if (ext > radius * (1.0 + 1e-6) + 1e-9) {
          ok = false;
          r.witness = y;
        }
      }
    }
    ++idx;
    r.measured.push_back(worst);
    r.bound.push_back(radius);
    r.config["penalties"].push_back(p.name());
  }
  finish(r, ok);
  return r;
}

CheckRecord l1_diameter() {
  CheckRecord r;
  bool ok = true;
  const Penalty p = Penalty::l1(1, 1.0);
  const double h = 1e-4;
  for (double eps : {0.05, 0.1, 0.5}) {
    double lo = 1e300, hi = -1e300;
    bool agree = true;
    for (int i = -20000; i <= 20000; ++i) {
      const Vec x = Vec::Constant(1, i * h);
      const bool closed = eps_subdifferential(p, eps, x).contains(Vec::Zero(1), 1e-12);
      const bool brute = eval(p, x) <= p.min_value() + eps + 1e-12;
      if (closed != brute) agree = false;
      if (closed) {
        lo = std::min(lo, x[0]);
        hi = std::max(hi, x[0]);
      }
    }
    const double diam = hi - lo;
    r.measured.push_back(diam);
    r.bound.push_back(2.0 * eps);
    if (!agree || std::abs(diam - 2.0 * eps) > 2.0 * h) {
      ok = false;
      r.witness = Vec::Constant(1, eps);
    }
  }
  r.note = "bound entries are the exact value 2 eps; grid spacing 1e-4";
  finish(r, ok);
  return r;
}

CheckRecord error_bound_l1() {
  CheckRecord r;
  const Penalty p = Penalty::l1(1, 1.0);
  // phi - min phi >= gamma0 dist(x, argmin phi) with gamma0 = weight.
  double worst = 1e300;
  for (int i = -10000; i <= 10000; ++i) {
    if (i == 0) continue;
    const double x = i * 1e-3;
    worst = std::min(worst, (eval(p, Vec::Constant(1, x)) - p.min_value()) / std::abs(x));
  }
  r.measured = {worst};
  r.bound = {p.weight};
  finish(r, worst >= p.weight * (1.0 - 1e-12));
  return r;
}

CheckRecord steiner_points() {
  CheckRecord r;
  double worst = 0.0;
  auto track = [&](const Vec& got, const Vec& want) {
    worst = std::max(worst, (got - want).norm());
  };
  const Vec c = (Vec(3) << 1.0, -2.0, 0.5).finished();
  track(steiner_point(ConvexSet::ball(c, 2.0)), c);
  const Vec a = (Vec(2) << 0.0, 1.0).finished(), b = (Vec(2) << 2.0, -1.0).finished();
  track(steiner_point(ConvexSet::segment(a, b)), 0.5 * (a + b));
  // Boxes through their support functions; the Steiner point is the centre.
  const Vec sq_c = (Vec(2) << 2.0, 0.0).finished();
  track(steiner_point(ConvexSet::from_support(
            2, [&](const Vec& u) { return u.dot(sq_c) + u.cwiseAbs().sum(); })),
        sq_c);
  track(steiner_point(ConvexSet::from_support(2, [](const Vec& u) { return u.cwiseAbs().sum(); })),
        Vec::Zero(2));
  track(steiner_point(ConvexSet::from_support(3, [](const Vec& u) { return u.cwiseAbs().sum(); })),
        Vec::Zero(3));
  // A support-function ball must land on its centre too.
  track(steiner_point(ConvexSet::from_support(3, [&](const Vec& u) { return u.dot(c) + 2.0 * u.norm(); })),
        c);
  r.measured = {worst};
  r.bound = {1e-6};
  // Steiner selections of d_eps psi are members of the set.
  bool member = true;
  for (const Penalty& p : {Penalty::l2(2, 1.0), Penalty::l1(1, 1.0)}) {
    const ApproxOperator g = make_type_e(p, 1.0, 0.1, Policy::steiner());
    for (double t : {-2.0, -0.5, 0.3, 1.5}) {
      const Vec y = Vec::Constant(p.dim, t);
      if (psi_subgradient_gap(p, 1.0, y, g.evaluate(y)) > 0.1 + 1e-6) member = false;
    }
  }
  r.measured.push_back(member ? 1.0 : 0.0);
  r.bound.push_back(1.0);
  finish(r, worst <= 1e-6 && member);
  return r;
}

CheckRecord b_implies_a(std::uint64_t seed) {
  CheckRecord r;
  bool ok = true;
  const double eps = 0.2;
  int idx = 0;
  for (const Penalty& p : {Penalty::sq_l2(2, 1.0), Penalty::l1(2, 1.0), Penalty::l2(2, 1.0),
                           Penalty::mcp(1, 1.0, 2.0)}) {
    const double bound = prox_constants(p, 1.0).L_psi * eps;
    double worst = 0.0;
    for (const Policy& pol : {Policy::random_sphere(), Policy::adversarial()}) {
      const ApproxOperator g = make_type_b(p, 1.0, eps, pol, derive_seed(seed, idx));
      for (const Vec& x : box_cloud(derive_seed(seed, 10 + idx), p.dim, 200, 5.0)) {
        const double d = (g.evaluate(x) - g.prox(x)).norm();
        worst = std::max(worst, d);
        if (d > bound * (1.0 + 1e-12)) {
          ok = false;
          r.witness = x;
        }
      }
    }
    ++idx;
    r.measured.push_back(worst);
    r.bound.push_back(bound);
    r.config["penalties"].push_back(p.name());
  }
  finish(r, ok);
  return r;
}

CheckRecord b_fixed_point_criticality(std::uint64_t seed) {
  CheckRecord r;
  bool ok = true;
  const double eps = 0.3;
  Rng rng(derive_seed(seed, 0));
  for (const Penalty& p : {Penalty::sq_l2(2, 1.0), Penalty::l1(2, 1.0), Penalty::l2(2, 1.0)}) {
    const Vec e = eps * unit_direction(rng, 2);
    const ApproxOperator g = make_type_b(p, 1.0, eps, Policy::fixed(e));
    const FixedPointResult fp =
        fixed_point_solve([&](const Vec& x) { return g.evaluate(x); }, Vec::Constant(2, 1.0),
                          {1e-12, 100000, 1.0 / 64, 1e9});
    const double d = subdifferential_distance(p, fp.x, Vec::Zero(2));
    r.measured.push_back(d);
    r.bound.push_back(eps);
    r.config["penalties"].push_back(p.name());
    if (!fp.converged || d > eps + 1e-8) {
      ok = false;
      r.witness = fp.x;
    }
  }
  finish(r, ok);
  return r;
}

CheckRecord c_fixed_point_optimality(std::uint64_t seed) {
  CheckRecord r;
  const Penalty p = Penalty::l1(1, 1.0);
  bool ok = true;
  int converged = 0;
  for (double eps : {0.05, 0.2}) {
    // Brute-forced (d_eps phi)^{-1}(0) = {x : phi(x) <= min phi + eps}.
    double lo = 1e300, hi = -1e300;
    for (int i = -40000; i <= 40000; ++i) {
      const double x = i * 1e-5;
      if (eval(p, Vec::Constant(1, x)) <= p.min_value() + eps) {
        lo = std::min(lo, x);
        hi = std::max(hi, x);
      }
    }
    const Policy policies[] = {Policy::boundary(DirectionMode::seeded, Vec::Constant(1, 1.0)),
                               Policy::boundary(DirectionMode::seeded, Vec::Constant(1, -1.0)),
                               Policy::adversarial()};
    for (const Policy& pol : policies) {
      const ApproxOperator g = make_type_c(p, 1.0, eps, pol, seed);
      for (double x0 : {-2.0, 0.0, 0.7, 3.0}) {
        const FixedPointResult fp = fixed_point_solve(
            [&](const Vec& x) { return g.evaluate(x); }, Vec::Constant(1, x0),
            {1e-12, 20000, 1.0 / 64, 1e9});
        if (!fp.converged) continue;
        ++converged;
        const double x = fp.x[0];
        r.measured.push_back(x);
        if (x < lo - 1e-5 - 1e-8 || x > hi + 1e-5 + 1e-8) {
          ok = false;
          r.witness = fp.x;
        }
      }
    }
    r.bound.push_back(hi);
  }
  r.note = "measured: converged fixed points; bound: brute-forced half-widths";
  finish(r, ok && converged > 0);
  return r;
}

CheckRecord const_no_fixed_point(std::uint64_t seed) {
  CheckRecord r;
  const Penalty p = Penalty::constant(2, 1.0);
  const Vec e = (Vec(2) << 0.06, 0.08).finished();
  const ApproxOperator g = make_type_a(p, 1.0, 0.1, Policy::fixed(e));
  FixedPointOptions opts;
  opts.max_iter = 2000;
  const NonexistenceCertificate c =
      certify_no_fixed_point([&](const Vec& x) { return g.evaluate(x); }, 2, seed, 8, 10.0, opts);
  r.measured = {static_cast<double>(c.failed_starts), c.min_grid_residual};
  r.bound = {8.0, e.norm()};
  finish(r, c.no_fixed_point && std::abs(c.min_grid_residual - e.norm()) < 1e-12);
  return r;
}

CheckRecord lower_bound_family() {
  CheckRecord r;
  bool ok = true;
  int i = 0;
  for (double L : {1.0, 2.0, 5.0, 10.0}) {
    for (double frac : {0.0, 0.25, 0.5, 0.9, 1.0}) {
      const double eps = (i % 3 == 0) ? 0.1 : (i % 3 == 1 ? 0.01 : 0.5);
      ++i;
      const CheckRecord c = check_lower_bound(L, frac * L, eps);
      r.measured.push_back(c.measured[0]);
      r.bound.push_back(c.bound[0]);
      if (c.failed()) {
        ok = false;
        r.witness = c.witness;
      }
    }
  }
  finish(r, ok);
  return r;
}

CheckRecord shrink_interval() {
  CheckRecord r;
  bool ok = true;
  const Penalty p = Penalty::constant(1, 0.0);  // psi(x) = x^2 / 2
  for (double n : {1.0, 2.0, 5.0, 10.0, 100.0}) {
    Policy pol = Policy::shrink(n);
    pol.box = 1.0;
    const ApproxOperator g = make_type_d(p, 1.0, 1.0 / (2.0 * n), pol);
    double gap = 0.0;
    for (int i = 0; i <= 1000; ++i) {
      const Vec x = Vec::Constant(1, i / 1000.0);
      gap = std::max(gap, std::abs(g.psi_eps(x) - psi_potential(p, x)));
    }
    r.measured.push_back(gap);
    r.bound.push_back(1.0 / (2.0 * n));
    if (std::abs(gap - 1.0 / (2.0 * n)) > 1e-12) {
      ok = false;
      r.witness = Vec::Constant(1, n);
    }
  }
  finish(r, ok);
  return r;
}

CheckRecord landau_family() {
  CheckRecord r;
  bool ok = true;
  for (const Penalty& p : {Penalty::sq_l2(1, 1.0), Penalty::l1(1, 1.0), Penalty::mcp(1, 1.0, 2.0),
                           Penalty::constant(1, 0.0)}) {
    for (double n : {2.0, 10.0, 50.0}) {
      for (double hw : {1.0, 3.0}) {
        const CheckRecord c = check_landau_kolmogorov(p, n, hw);
        r.measured.push_back(c.measured[0]);
        r.bound.push_back(c.bound[0]);
        if (c.failed()) {
          ok = false;
          r.witness = c.witness;
        }
      }
    }
  }
  finish(r, ok);
  return r;
}

CheckRecord weak_split() {
  CheckRecord r;
  bool ok = true;
  const Penalty mcp = Penalty::mcp(1, 1.0, 2.0);
  const double gamma = 0.5 / mcp.rho();
  const WeakSplit ws = weakly_convex_split(mcp, gamma);
  // Sampled midpoint convexity of the convexified part.
  Rng rng(7);
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  double worst_mid = -1e300;
  for (int i = 0; i < 1000; ++i) {
    const Vec a = Vec::Constant(1, u(rng)), b = Vec::Constant(1, u(rng));
    const double d = eval(ws.convex_part, 0.5 * (a + b)) -
                     0.5 * (eval(ws.convex_part, a) + eval(ws.convex_part, b));
    worst_mid = std::max(worst_mid, d);
  }
  ok = ok && worst_mid <= 1e-12 && ws.convex_part.rho() == 0.0;
  // One scheme step never increases phi.
  double worst_step = -1e300;
  for (double x0 : {-3.0, -0.7, 0.5, 1.0, 1.5, 3.0}) {
    const Vec x = Vec::Constant(1, x0);
    const double d = eval(mcp, ws.step(x)) - eval(mcp, x);
    worst_step = std::max(worst_step, d);
  }
  ok = ok && worst_step <= 1e-15;
  // Convex input: zero smooth part, unchanged penalty.
  const Penalty l1 = Penalty::l1(2, 1.0);
  const WeakSplit wc = weakly_convex_split(l1, 1.0);
  const bool trivial = wc.rho == 0.0 && wc.convex_part == l1 &&
                       wc.smooth_grad(Vec::Constant(2, 3.0)).norm() == 0.0;
  ok = ok && trivial;
  r.measured = {worst_mid, worst_step, trivial ? 1.0 : 0.0};
  r.bound = {0.0, 0.0, 1.0};
  finish(r, ok);
  return r;
}

CheckRecord transfer_all(std::uint64_t seed) {
  CheckRecord r;
  bool ok = true;
  int idx = 0;
  for (const Penalty& p : {Penalty::sq_l2(2, 1.0), Penalty::l1(2, 1.0), Penalty::l2(2, 1.0)}) {
    const CheckRecord c = check_prox_transfer(p, 100, derive_seed(seed, idx++));
    r.measured.push_back(c.measured[0]);
    r.bound.push_back(c.bound[0]);
    r.config["penalties"].push_back(p.name());
    if (c.failed()) {
      ok = false;
      r.witness = c.witness;
    }
  }
  finish(r, ok);
  return r;
}

}  // namespace checks

CheckRecord check_lower_bound(double L, double L_prime, double eps) {
  require(L > 0 && L_prime >= 0 && L_prime <= L, "need 0 <= L' <= L");
  require(eps > 0, "eps must be positive");
  CheckRecord r;
  r.config = {{"L", L}, {"L_prime", L_prime}, {"eps", eps}};
  double gap = 0.0;
  for (int i = -1000; i <= 1000; ++i) {
    const double x = eps * i / 1000.0;
    gap = std::max(gap, std::abs(0.5 * L * x * x - 0.5 * L_prime * x * x));
  }
  const double bound = (L - L_prime) * eps * eps / 4.0;
  // L - eta < L' + 4 gap / t0^2 with t0 the segment half-length.
  const double eta = 1e-12;
  const bool theorem = L - eta < L_prime + 4.0 * gap / (eps * eps);
  r.measured = {gap};
  r.bound = {bound};
  checks::finish(r, gap >= bound && theorem);
  return r;
}

CheckRecord check_landau_kolmogorov(const Penalty& p, double n, double half_width) {
  require(p.dim == 1, "Landau-Kolmogorov check is one-dimensional");
  CheckRecord r;
  r.config = {{"penalty", p.to_json()}, {"n", n}, {"half_width", half_width}};
  Policy pol = Policy::shrink(n);
  pol.box = half_width;
  const ApproxOperator g = make_type_d(p, 1.0, half_width * half_width / (2.0 * n), pol);
  double eps_hat = 0.0, dgap = 0.0;
  for (int i = -2000; i <= 2000; ++i) {
    const Vec x = Vec::Constant(1, half_width * i / 2000.0);
    eps_hat = std::max(eps_hat, std::abs(g.psi_eps(x) - psi_potential(p, x)));
    dgap = std::max(dgap, std::abs(g.evaluate(x)[0] - g.prox(x)[0]));
  }
  const double L_psi = prox_constants(p, 1.0).L_psi;
  const double bound = 2.0 * std::sqrt((L_psi + g.L_eps()) * eps_hat);
  r.measured = {dgap, eps_hat};
  r.bound = {bound};
  checks::finish(r, dgap <= bound);
  return r;
}

CheckRecord check_prox_transfer(const Penalty& p, int points, std::uint64_t seed) {
  CheckRecord r;
  r.config = {{"penalty", p.to_json()}, {"points", points}};
  Rng rng(derive_seed(seed, 1));
  std::uniform_real_distribution<double> ug(0.2, 2.0), ua(0.1, 2.0);
  double worst = 0.0;
  bool ok = true;
  for (const Vec& z : box_cloud(seed, p.dim, points, 5.0)) {
    const double gamma = ug(rng), alpha = ua(rng);
    const TransferPair t = prox_scaling_transfer(p, gamma, alpha, z);
    const double d = (t.lhs - t.rhs).norm();
    worst = std::max(worst, d);
    if (d > 1e-9) {
      ok = false;
      r.witness = z;
    }
  }
  r.measured = {worst};
  r.bound = {1e-9};
  checks::finish(r, ok);
  return r;
}

CheckRecord check_eps_subdifferential(const Penalty& p, int triples, std::uint64_t seed) {
  require(p.kind == PenaltyKind::sq_l2 || p.kind == PenaltyKind::l2 ||
              (p.kind == PenaltyKind::l1 && p.dim == 1),
          "closed-form eps-subdifferential check supports sq_l2, l2 and l1 in 1D");
  CheckRecord r;
  r.config = {{"penalty", p.to_json()}, {"triples", triples}};
  const int n = p.dim;
  Rng rng(derive_seed(seed, 1));
  std::uniform_real_distribution<double> ux(-2.0, 2.0), ue(0.01, 1.0);
  std::normal_distribution<double> nd(0.0, 0.8);

  // Probe points x' = x + t u on a polar grid, t log-spaced in [1e-4, 1e4],
  // plus the origin where l1 and l2 have their kink.
  std::vector<Vec> dirs;
  if (n == 1) {
    dirs = {Vec::Constant(1, 1.0), Vec::Constant(1, -1.0)};
  } else {
    for (int k = 0; k < 720; ++k) {
      const double a = 2.0 * std::numbers::pi * k / 720.0;
      dirs.push_back((Vec(2) << std::cos(a), std::sin(a)).finished());
    }
  }
  std::vector<double> ts;
  for (int k = 0; k <= 240; ++k) ts.push_back(1e-4 * std::pow(1e8, k / 240.0));

  int kept = 0, disagree = 0, attempts = 0;
  while (kept < triples && attempts < 50 * triples) {
    ++attempts;
    Vec x(n), s(n);
    for (int i = 0; i < n; ++i) x[i] = ux(rng);
    const double eps = ue(rng);
    const Vec base = p.kind == PenaltyKind::sq_l2 ? Vec(p.weight * x) : Vec(Vec::Zero(n));
    for (int i = 0; i < n; ++i) s[i] = base[i] + nd(rng);
    // Skip triples within reach of the probe resolution.
    const double conj = convexified_conjugate(p, 1.0, 0.0, s);
    if (p.kind != PenaltyKind::sq_l2) {
      const double dual = p.kind == PenaltyKind::l2 ? s.norm() : s.cwiseAbs().maxCoeff();
      if (std::abs(dual - p.weight) < 0.05) continue;
    }
    if (std::isfinite(conj) && std::abs(conj + eval(p, x) - s.dot(x) - eps) < 0.02) continue;
    ++kept;
    const bool closed = eps_subdifferential(p, eps, x).contains(s, 1e-12);
    const double fx = eval(p, x);
    double brute = s.dot(-x) - eval(p, Vec::Zero(n)) + fx;
    for (const Vec& u : dirs) {
      for (double t : ts) brute = std::max(brute, t * s.dot(u) - eval(p, x + t * u) + fx);
    }
    if (closed != (brute <= eps)) {
      ++disagree;
      r.witness = x;
    }
  }
  r.measured = {static_cast<double>(disagree), static_cast<double>(kept)};
  r.bound = {0.0, static_cast<double>(triples)};
  checks::finish(r, disagree == 0 && kept == triples);
  return r;
}

}  // namespace iprox
