#pragma once

#include <variant>

#include "iprox/types.hpp"

namespace iprox {

struct Ball {
  Vec center;
  double radius = 0.0;
};

struct Segment {
  Vec a;
  Vec b;
};

/// Ball intersected with the half-space <normal, s> >= offset, normal a unit
/// vector.
struct BallCap {
  Vec center;
  double radius = 0.0;
  Vec normal;
  double offset = 0.0;
};

/// Set known only through its support function and a membership predicate.
struct SupportFn {
  int dim = 0;
  ScalarFn sigma;
  std::function<bool(const Vec&, double)> contains;
};

class ConvexSet {
 public:
  using Shape = std::variant<Ball, Segment, BallCap, SupportFn>;

  ConvexSet(Shape s);  // NOLINT: implicit by design

  static ConvexSet ball(Vec center, double radius);
  static ConvexSet segment(Vec a, Vec b);
  static ConvexSet cap(Vec center, double radius, Vec normal, double offset);
  static ConvexSet from_support(int dim, ScalarFn sigma,
                                std::function<bool(const Vec&, double)> contains = {});

  int dim() const;
  const Shape& shape() const { return shape_; }
  bool is_ball() const { return std::holds_alternative<Ball>(shape_); }

  /// Membership with absolute slack tol.
  bool contains(const Vec& s, double tol = 1e-12) const;
  /// sigma_K(u) = sup_{s in K} <s, u>.
  double support(const Vec& u) const;

 private:
  Shape shape_;
};

/// s(K) = n * integral over the unit sphere of u sigma_K(u) (normalized
/// measure). Closed form for balls and segments, quadrature otherwise.
Vec steiner_point(const ConvexSet& k);

/// Hausdorff distance between two balls.
double hausdorff_ball_distance(const ConvexSet& a, const ConvexSet& b);

}  // namespace iprox
