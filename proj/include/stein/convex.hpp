#pragma once

#include <optional>
#include <span>
#include <string>
#include <variant>

#include "stein/gaussian.hpp"

namespace stein {

/// {x : normal . x <= offset}; normal has unit length. offset = +inf is the
/// whole space.
struct HalfSpace {
  Vector normal;
  double offset = 0.0;
};

/// Closed ball.
struct Ball {
  Vector center;
  double radius = 0.0;
};

/// {x : (x - c)^T shape^{-1} (x - c) <= 1}. The principal frame is cached:
/// shape = axes * diag(semi_axes^2) * axes^T.
struct Ellipsoid {
  Vector center;
  Matrix shape;
  Matrix inverse;
  Matrix axes;
  Vector semi_axes;
};

/// Closed axis-aligned box.
struct Box {
  Vector lower;
  Vector upper;
};

/// Level set {x : sd_base(x) <= delta} of the signed distance to a box or an
/// ellipsoid. delta > 0 is a dilation, delta < 0 an erosion. These bodies
/// leave the closed-form catalog, so they are handled through membership and
/// signed distance only.
struct Offset {
  std::variant<Box, Ellipsoid> base;
  double delta = 0.0;
};

struct Empty {
  int dim = 1;
};

/// A closed convex subset of R^k from a small analytic catalog.
class ConvexSet {
 public:
  using Variant = std::variant<HalfSpace, Ball, Ellipsoid, Box, Offset, Empty>;

  static ConvexSet half_space(Vector normal, double offset);
  static ConvexSet ball(Vector center, double radius);
  static ConvexSet ellipsoid(Vector center, Matrix shape);
  static ConvexSet box(Vector lower, Vector upper);
  static ConvexSet empty(int k);
  static ConvexSet whole_space(int k);

  int dim() const;
  const Variant& variant() const { return v_; }
  /// "half-space", "ball", "ellipsoid", "box", "offset" or "empty".
  std::string kind() const;

  bool is_empty() const { return std::holds_alternative<Empty>(v_); }
  bool is_whole_space() const;

  explicit ConvexSet(Variant v) : v_(std::move(v)) {}

 private:
  Variant v_;
};

struct Interval {
  double lo;
  double hi;
};

bool contains(const ConvexSet& set, const Vector& x);

/// Signed Euclidean distance to the boundary, negative inside. Convex in x.
double signed_distance(const ConvexSet& set, const Vector& x);

/// Closed outer neighbourhood {x : dist(x, C) <= eps}.
ConvexSet dilate(const ConvexSet& set, double eps);
/// {x : closed eps-ball around x lies in C}; collapses to Empty.
ConvexSet erode(const ConvexSet& set, double eps);

ConvexSet translate(const ConvexSet& set, const Vector& shift);
/// The image b * C, b > 0.
ConvexSet scale(const ConvexSet& set, double factor);

/// Parameter interval {tau : origin + tau * e_axis in C}. Convexity makes the
/// section an interval; endpoints may be infinite.
std::optional<Interval> line_section(const ConvexSet& set, const Vector& origin, int axis);

/// True for sets whose slices have closed-form projections (ball, ellipsoid,
/// box, empty).
bool has_slice_ranges(const ConvexSet& set);

/// Range of x_axis over {x in C : x_j = point_j for every j not in free_axes}.
/// Requires has_slice_ranges(set); axis must be one of free_axes.
std::optional<Interval> slice_range(const ConvexSet& set, const Vector& point, std::span<const int> free_axes,
                                    int axis);

/// Axis along which line sections are taken for this set.
int preferred_axis(const ConvexSet& set);

/// Centre and radius of a ball containing the set (radius may be +inf).
std::pair<Vector, double> bounding_ball(const ConvexSet& set);

}  // namespace stein
