#include "iprox/convex_set.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include "iprox/errors.hpp"

namespace iprox {

namespace {

constexpr std::array<std::array<double, 4>, 302> kLebedev302 = {{
#include "lebedev302.inc"
}};

constexpr int kCircleNodes = 256;

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

// sup over {||s|| <= r, <n, s> >= b} of <u, s>, n a unit vector.
double cap_support(const Vec& u, double r, const Vec& n, double b) {
  const double un = u.norm();
  if (un == 0.0) return 0.0;
  if (b <= -r) return r * un;
  const Vec top = r * u / un;
  if (n.dot(top) >= b) return r * un;
  const Vec perp = u - u.dot(n) * n;
  return b * u.dot(n) + std::sqrt(std::max(r * r - b * b, 0.0)) * perp.norm();
}

}  // namespace

ConvexSet::ConvexSet(Shape s) : shape_(std::move(s)) {}

ConvexSet ConvexSet::ball(Vec center, double radius) {
  require(radius >= 0, "ball radius must be nonnegative");
  return ConvexSet(Ball{std::move(center), radius});
}

ConvexSet ConvexSet::segment(Vec a, Vec b) {
  require_dim(b.size(), a.size(), "segment");
  return ConvexSet(Segment{std::move(a), std::move(b)});
}

ConvexSet ConvexSet::cap(Vec center, double radius, Vec normal, double offset) {
  require(radius >= 0, "cap radius must be nonnegative");
  require_dim(normal.size(), center.size(), "cap");
  require(std::abs(normal.norm() - 1.0) < 1e-12, "cap normal must be a unit vector");
  require(offset <= radius, "cap is empty");
  return ConvexSet(BallCap{std::move(center), radius, std::move(normal), offset});
}

ConvexSet ConvexSet::from_support(int dim, ScalarFn sigma,
                                  std::function<bool(const Vec&, double)> contains) {
  require(dim > 0, "support-function set needs a positive dimension");
  return ConvexSet(SupportFn{dim, std::move(sigma), std::move(contains)});
}

int ConvexSet::dim() const {
  return std::visit(overloaded{[](const Ball& b) { return static_cast<int>(b.center.size()); },
                               [](const Segment& s) { return static_cast<int>(s.a.size()); },
                               [](const BallCap& c) { return static_cast<int>(c.center.size()); },
                               [](const SupportFn& f) { return f.dim; }},
                    shape_);
}

bool ConvexSet::contains(const Vec& s, double tol) const {
  require_dim(s.size(), dim(), "ConvexSet::contains");
  return std::visit(
      overloaded{
          [&](const Ball& b) { return (s - b.center).norm() <= b.radius + tol; },
          [&](const Segment& seg) {
            const Vec d = seg.b - seg.a;
            const double dd = d.squaredNorm();
            const double t = dd > 0 ? std::clamp((s - seg.a).dot(d) / dd, 0.0, 1.0) : 0.0;
            return (s - (seg.a + t * d)).norm() <= tol;
          },
          [&](const BallCap& c) {
            const Vec r = s - c.center;
            return r.norm() <= c.radius + tol && c.normal.dot(r) >= c.offset - tol;
          },
          [&](const SupportFn& f) {
            require(static_cast<bool>(f.contains), "set has no membership predicate");
            return f.contains(s, tol);
          }},
      shape_);
}

double ConvexSet::support(const Vec& u) const {
  require_dim(u.size(), dim(), "ConvexSet::support");
  return std::visit(
      overloaded{[&](const Ball& b) { return b.center.dot(u) + b.radius * u.norm(); },
                 [&](const Segment& s) { return std::max(s.a.dot(u), s.b.dot(u)); },
                 [&](const BallCap& c) {
                   return c.center.dot(u) + cap_support(u, c.radius, c.normal, c.offset);
                 },
                 [&](const SupportFn& f) { return f.sigma(u); }},
      shape_);
}

Vec steiner_point(const ConvexSet& k) {
  if (const auto* b = std::get_if<Ball>(&k.shape())) return b->center;
  if (const auto* s = std::get_if<Segment>(&k.shape())) return 0.5 * (s->a + s->b);
  const int n = k.dim();
  Vec acc = Vec::Zero(n);
  if (n == 1) {
    Vec u(1);
    u[0] = 1.0;
    const double hi = k.support(u);
    u[0] = -1.0;
    const double lo = -k.support(u);
    acc[0] = 0.5 * (hi + lo);
    return acc;
  }
  if (n == 2) {
    Vec u(2);
    for (int j = 0; j < kCircleNodes; ++j) {
      const double t = 2.0 * std::numbers::pi * j / kCircleNodes;
      u << std::cos(t), std::sin(t);
      acc += u * k.support(u);
    }
    return 2.0 * acc / kCircleNodes;
  }
  if (n == 3) {
    Vec u(3);
    for (const auto& node : kLebedev302) {
      u << node[0], node[1], node[2];
      acc += node[3] * u * k.support(u);
    }
    return 3.0 * acc;
  }
  throw ConstraintError("steiner quadrature supports dimension <= 3, got " + std::to_string(n));
}

double hausdorff_ball_distance(const ConvexSet& a, const ConvexSet& b) {
  const auto* ba = std::get_if<Ball>(&a.shape());
  const auto* bb = std::get_if<Ball>(&b.shape());
  if (ba == nullptr || bb == nullptr) {
    throw ConstraintError("hausdorff_ball_distance needs two balls");
  }
  require_dim(bb->center.size(), ba->center.size(), "hausdorff_ball_distance");
  return (ba->center - bb->center).norm() + std::abs(ba->radius - bb->radius);
}

}  // namespace iprox
