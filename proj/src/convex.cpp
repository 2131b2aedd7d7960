#include "stein/convex.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

namespace stein {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void require_finite(const Vector& v, const char* what) {
  if (v.size() == 0) throw DomainError(std::string(what) + ": empty vector");
  if (!v.allFinite()) throw DomainError(std::string(what) + ": non-finite coordinate");
}

void require_dim(const ConvexSet& set, const Vector& x) {
  if (x.size() != set.dim()) {
    throw DomainError("dimension mismatch: set has k = " + std::to_string(set.dim()) + ", point has " +
                      std::to_string(x.size()));
  }
}

Ellipsoid make_ellipsoid(Vector center, Matrix shape) {
  require_finite(center, "ellipsoid center");
  if (shape.rows() != center.size() || shape.cols() != center.size())
    throw DomainError("ellipsoid: shape must be k x k");
  if (!shape.allFinite()) throw DomainError("ellipsoid: non-finite shape");
  if ((shape - shape.transpose()).cwiseAbs().maxCoeff() > 1e-12 * std::max(1.0, shape.cwiseAbs().maxCoeff()))
    throw DomainError("ellipsoid: shape must be symmetric");
  Eigen::SelfAdjointEigenSolver<Matrix> eig(shape);
  if (eig.eigenvalues().minCoeff() <= 0.0) throw DomainError("ellipsoid: shape must be positive definite");
  Ellipsoid e;
  e.center = std::move(center);
  e.shape = 0.5 * (shape + shape.transpose());
  e.axes = eig.eigenvectors();
  e.semi_axes = eig.eigenvalues().cwiseSqrt();
  e.inverse = e.axes * eig.eigenvalues().cwiseInverse().asDiagonal() * e.axes.transpose();
  return e;
}

double box_signed_distance(const Box& b, const Vector& x) {
  const Eigen::ArrayXd below = b.lower.array() - x.array();
  const Eigen::ArrayXd above = x.array() - b.upper.array();
  const Eigen::ArrayXd excess = below.max(above);
  if ((excess <= 0.0).all()) return excess.maxCoeff();
  return excess.max(0.0).matrix().norm();
}

// Distance from y (principal coordinates) to the ellipsoid surface
// sum y_i^2 / a_i^2 = 1. The closest point is a^2 y / (a^2 + mu) where mu
// is the root of g(mu) = sum (a_i y_i / (a_i^2 + mu))^2 - 1, decreasing on
// (-min a^2, inf). Outside points have mu > 0, inside points mu < 0.
double ellipsoid_signed_distance(const Ellipsoid& e, const Vector& x) {
  const Eigen::ArrayXd y = (e.axes.transpose() * (x - e.center)).array();
  const Eigen::ArrayXd a2 = e.semi_axes.array().square();
  const double level = (y.square() / a2).sum();
  if (level == 1.0) return 0.0;
  const auto g = [&](double mu) { return ((e.semi_axes.array() * y) / (a2 + mu)).square().sum() - 1.0; };
  const auto dg = [&](double mu) { return -2.0 * (a2 * y.square() / (a2 + mu).cube()).sum(); };
  const auto closest = [&](double mu) -> Eigen::ArrayXd { return a2 * y / (a2 + mu); };

  double lo;
  double hi;
  if (level > 1.0) {
    lo = 0.0;
    hi = std::sqrt(a2.maxCoeff()) * std::sqrt(y.square().sum());
  } else {
    const double a2_min = a2.minCoeff();
    // Limit of g at mu -> -a2_min with the min-axis terms that vanish dropped.
    bool singular = false;
    double limit = -1.0;
    for (Eigen::Index i = 0; i < y.size(); ++i) {
      if (a2(i) - a2_min <= 1e-14 * a2_min) {
        if (std::abs(y(i)) > 1e-300) singular = true;
      } else {
        limit += std::pow(std::sqrt(a2(i)) * y(i) / (a2(i) - a2_min), 2);
      }
    }
    if (!singular && limit <= 0.0) {
      // The nearest boundary point leaves the min-axis direction; fill the
      // remaining quadratic budget along the first min axis.
      Eigen::ArrayXd p = y;
      double used = 0.0;
      Eigen::Index min_axis = -1;
      for (Eigen::Index i = 0; i < y.size(); ++i) {
        if (a2(i) - a2_min <= 1e-14 * a2_min) {
          p(i) = 0.0;
          if (min_axis < 0) min_axis = i;
        } else {
          p(i) = a2(i) * y(i) / (a2(i) - a2_min);
          used += p(i) * p(i) / a2(i);
        }
      }
      p(min_axis) = std::sqrt(a2_min * std::max(0.0, 1.0 - used));
      return -std::sqrt((y - p).square().sum());
    }
    lo = -a2_min;
    hi = 0.0;
  }
  // Safeguarded Newton on the bracket [lo, hi] with g(lo) > 0 >= g(hi).
  double mu = level > 1.0 ? 0.5 * (lo + hi) : hi;
  for (int it = 0; it < 200; ++it) {
    const double gv = g(mu);
    if (gv > 0.0) lo = mu; else hi = mu;
    if (std::abs(gv) < 1e-15 || hi - lo <= 1e-15 * std::max(1.0, std::abs(mu))) break;
    double next = mu - gv / dg(mu);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    mu = next;
  }
  const double dist = std::sqrt((y - closest(mu)).square().sum());
  return level > 1.0 ? dist : -dist;
}

double base_signed_distance(const std::variant<Box, Ellipsoid>& base, const Vector& x) {
  return std::visit(Overloaded{[&](const Box& b) { return box_signed_distance(b, x); },
                               [&](const Ellipsoid& e) { return ellipsoid_signed_distance(e, x); }},
                    base);
}

std::optional<Interval> quadratic_section(double qa, double qb, double qc) {
  // qa tau^2 + 2 qb tau + qc <= 0 with qa > 0.
  const double disc = qb * qb - qa * qc;
  if (disc < 0.0) return std::nullopt;
  const double root = std::sqrt(disc);
  // Cancellation-free pair of roots.
  const double q = -(qb + std::copysign(root, qb));
  double r1 = q / qa;
  double r2 = q != 0.0 ? qc / q : -r1;
  if (r1 > r2) std::swap(r1, r2);
  return Interval{r1, r2};
}

// Section of {g <= 0} for g convex along the line, searched inside `bound`.
std::optional<Interval> convex_level_section(const std::function<double(double)>& g, Interval bound) {
  constexpr double inv_phi = 0.6180339887498949;
  double a = bound.lo;
  double b = bound.hi;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double gc = g(c);
  double gd = g(d);
  for (int it = 0; it < 200 && b - a > 1e-13 * std::max(1.0, std::abs(a) + std::abs(b)); ++it) {
    if (gc <= 0.0 || gd <= 0.0) break;
    if (gc < gd) {
      b = d;
      d = c;
      gd = gc;
      c = b - inv_phi * (b - a);
      gc = g(c);
    } else {
      a = c;
      c = d;
      gc = gd;
      d = a + inv_phi * (b - a);
      gd = g(d);
    }
  }
  double inside;
  if (gc <= 0.0) inside = c;
  else if (gd <= 0.0) inside = d;
  else return std::nullopt;
  const auto bisect = [&](double out, double in) {
    for (int it = 0; it < 200 && std::abs(in - out) > 1e-14 * std::max(1.0, std::abs(in)); ++it) {
      const double mid = 0.5 * (out + in);
      (g(mid) <= 0.0 ? in : out) = mid;
    }
    return in;
  };
  return Interval{bisect(bound.lo, inside), bisect(bound.hi, inside)};
}

}  // namespace

ConvexSet ConvexSet::half_space(Vector normal, double offset) {
  require_finite(normal, "half-space normal");
  if (std::isnan(offset) || offset == -kInf) throw DomainError("half-space: offset must be a number below +inf");
  if (std::abs(normal.norm() - 1.0) > 1e-12) throw DomainError("half-space: normal must have unit length");
  return ConvexSet(HalfSpace{std::move(normal), offset});
}

ConvexSet ConvexSet::ball(Vector center, double radius) {
  require_finite(center, "ball center");
  if (!(radius >= 0.0) || std::isinf(radius)) throw DomainError("ball: radius must be finite and nonnegative");
  return ConvexSet(Ball{std::move(center), radius});
}

ConvexSet ConvexSet::ellipsoid(Vector center, Matrix shape) {
  return ConvexSet(make_ellipsoid(std::move(center), std::move(shape)));
}

ConvexSet ConvexSet::box(Vector lower, Vector upper) {
  require_finite(lower, "box lower");
  require_finite(upper, "box upper");
  if (lower.size() != upper.size()) throw DomainError("box: corner dimensions differ");
  if ((lower.array() > upper.array()).any()) throw DomainError("box: lower must not exceed upper");
  return ConvexSet(Box{std::move(lower), std::move(upper)});
}

ConvexSet ConvexSet::empty(int k) {
  if (k < 1) throw DomainError("empty: k must be positive");
  return ConvexSet(Empty{k});
}

ConvexSet ConvexSet::whole_space(int k) {
  if (k < 1) throw DomainError("whole_space: k must be positive");
  return ConvexSet(HalfSpace{Vector::Unit(k, 0), kInf});
}

int ConvexSet::dim() const {
  return std::visit(Overloaded{[](const HalfSpace& h) { return static_cast<int>(h.normal.size()); },
                               [](const Ball& b) { return static_cast<int>(b.center.size()); },
                               [](const Ellipsoid& e) { return static_cast<int>(e.center.size()); },
                               [](const Box& b) { return static_cast<int>(b.lower.size()); },
                               [](const Offset& o) {
                                 return std::visit(
                                     Overloaded{[](const Box& b) { return static_cast<int>(b.lower.size()); },
                                                [](const Ellipsoid& e) { return static_cast<int>(e.center.size()); }},
                                     o.base);
                               },
                               [](const Empty& e) { return e.dim; }},
                    v_);
}

std::string ConvexSet::kind() const {
  return std::visit(Overloaded{[](const HalfSpace&) { return std::string("half-space"); },
                               [](const Ball&) { return std::string("ball"); },
                               [](const Ellipsoid&) { return std::string("ellipsoid"); },
                               [](const Box&) { return std::string("box"); },
                               [](const Offset&) { return std::string("offset"); },
                               [](const Empty&) { return std::string("empty"); }},
                    v_);
}

bool ConvexSet::is_whole_space() const {
  const auto* h = std::get_if<HalfSpace>(&v_);
  return h != nullptr && h->offset == kInf;
}

bool contains(const ConvexSet& set, const Vector& x) {
  require_dim(set, x);
  return std::visit(
      Overloaded{[&](const HalfSpace& h) { return h.normal.dot(x) <= h.offset; },
                 [&](const Ball& b) { return (x - b.center).squaredNorm() <= b.radius * b.radius; },
                 [&](const Ellipsoid& e) {
                   const Vector d = x - e.center;
                   return d.dot(e.inverse * d) <= 1.0;
                 },
                 [&](const Box& b) { return (x.array() >= b.lower.array()).all() && (x.array() <= b.upper.array()).all(); },
                 [&](const Offset& o) { return base_signed_distance(o.base, x) <= o.delta; },
                 [](const Empty&) { return false; }},
      set.variant());
}

double signed_distance(const ConvexSet& set, const Vector& x) {
  require_dim(set, x);
  return std::visit(Overloaded{[&](const HalfSpace& h) { return h.normal.dot(x) - h.offset; },
                               [&](const Ball& b) { return (x - b.center).norm() - b.radius; },
                               [&](const Ellipsoid& e) { return ellipsoid_signed_distance(e, x); },
                               [&](const Box& b) { return box_signed_distance(b, x); },
                               [&](const Offset& o) { return base_signed_distance(o.base, x) - o.delta; },
                               [](const Empty&) { return kInf; }},
                    set.variant());
}

ConvexSet dilate(const ConvexSet& set, double eps) {
  if (!(eps >= 0.0) || std::isinf(eps)) throw DomainError("dilate: eps must be finite and nonnegative");
  return std::visit(
      Overloaded{[&](const HalfSpace& h) { return ConvexSet(HalfSpace{h.normal, h.offset + eps}); },
                 [&](const Ball& b) { return ConvexSet(Ball{b.center, b.radius + eps}); },
                 [&](const Ellipsoid& e) { return eps == 0.0 ? set : ConvexSet(Offset{e, eps}); },
                 [&](const Box& b) { return eps == 0.0 ? set : ConvexSet(Offset{b, eps}); },
                 [&](const Offset& o) {
                   if (o.delta < 0.0 && eps > 0.0)
                     throw DomainError("dilate: dilating an eroded ellipsoid leaves the catalog");
                   return ConvexSet(Offset{o.base, o.delta + eps});
                 },
                 [&](const Empty&) { return set; }},
      set.variant());
}

ConvexSet erode(const ConvexSet& set, double eps) {
  if (!(eps >= 0.0) || std::isinf(eps)) throw DomainError("erode: eps must be finite and nonnegative");
  if (eps == 0.0) return set;
  const int k = set.dim();
  return std::visit(
      Overloaded{[&](const HalfSpace& h) { return ConvexSet(HalfSpace{h.normal, h.offset - eps}); },
                 [&](const Ball& b) {
                   return b.radius - eps <= 0.0 ? ConvexSet::empty(k) : ConvexSet(Ball{b.center, b.radius - eps});
                 },
                 [&](const Ellipsoid& e) {
                   return eps >= e.semi_axes.minCoeff() ? ConvexSet::empty(k) : ConvexSet(Offset{e, -eps});
                 },
                 [&](const Box& b) {
                   Box shrunk{(b.lower.array() + eps).matrix(), (b.upper.array() - eps).matrix()};
                   if ((shrunk.upper.array() <= shrunk.lower.array()).any()) return ConvexSet::empty(k);
                   return ConvexSet(std::move(shrunk));
                 },
                 [&](const Offset& o) {
                   if (o.delta >= eps) {
                     const double rest = o.delta - eps;
                     if (rest == 0.0) return std::visit([](const auto& base) { return ConvexSet(base); }, o.base);
                     return ConvexSet(Offset{o.base, rest});
                   }
                   const double rest = eps - std::max(o.delta, 0.0);
                   if (o.delta < 0.0) {
                     const auto& e = std::get<Ellipsoid>(o.base);
                     const double total = rest - o.delta;
                     return total >= e.semi_axes.minCoeff() ? ConvexSet::empty(k) : ConvexSet(Offset{e, -total});
                   }
                   return std::visit([&](const auto& base) { return erode(ConvexSet(base), rest); }, o.base);
                 },
                 [&](const Empty&) { return set; }},
      set.variant());
}

ConvexSet translate(const ConvexSet& set, const Vector& shift) {
  require_dim(set, shift);
  require_finite(shift, "translate");
  const auto move_base = Overloaded{
      [&](const Box& b) -> std::variant<Box, Ellipsoid> { return Box{b.lower + shift, b.upper + shift}; },
      [&](const Ellipsoid& e) -> std::variant<Box, Ellipsoid> {
        Ellipsoid moved = e;
        moved.center += shift;
        return moved;
      }};
  return std::visit(
      Overloaded{[&](const HalfSpace& h) { return ConvexSet(HalfSpace{h.normal, h.offset + h.normal.dot(shift)}); },
                 [&](const Ball& b) { return ConvexSet(Ball{b.center + shift, b.radius}); },
                 [&](const Ellipsoid& e) { return ConvexSet(std::get<Ellipsoid>(move_base(e))); },
                 [&](const Box& b) { return ConvexSet(std::get<Box>(move_base(b))); },
                 [&](const Offset& o) { return ConvexSet(Offset{std::visit(move_base, o.base), o.delta}); },
                 [&](const Empty&) { return set; }},
      set.variant());
}

ConvexSet scale(const ConvexSet& set, double factor) {
  if (!(factor > 0.0) || std::isinf(factor)) throw DomainError("scale: factor must be finite and positive");
  const auto scale_base = Overloaded{
      [&](const Box& b) -> std::variant<Box, Ellipsoid> { return Box{factor * b.lower, factor * b.upper}; },
      [&](const Ellipsoid& e) -> std::variant<Box, Ellipsoid> {
        Ellipsoid s = e;
        s.center *= factor;
        s.shape *= factor * factor;
        s.inverse /= factor * factor;
        s.semi_axes *= factor;
        return s;
      }};
  return std::visit(
      Overloaded{[&](const HalfSpace& h) { return ConvexSet(HalfSpace{h.normal, factor * h.offset}); },
                 [&](const Ball& b) { return ConvexSet(Ball{factor * b.center, factor * b.radius}); },
                 [&](const Ellipsoid& e) { return ConvexSet(std::get<Ellipsoid>(scale_base(e))); },
                 [&](const Box& b) { return ConvexSet(std::get<Box>(scale_base(b))); },
                 [&](const Offset& o) { return ConvexSet(Offset{std::visit(scale_base, o.base), factor * o.delta}); },
                 [&](const Empty&) { return set; }},
      set.variant());
}

std::pair<Vector, double> bounding_ball(const ConvexSet& set) {
  const int k = set.dim();
  const auto base_ball = Overloaded{
      [](const Box& b) { return std::pair<Vector, double>{0.5 * (b.lower + b.upper), 0.5 * (b.upper - b.lower).norm()}; },
      [](const Ellipsoid& e) { return std::pair<Vector, double>{e.center, e.semi_axes.maxCoeff()}; }};
  return std::visit(Overloaded{[&](const HalfSpace&) { return std::pair<Vector, double>{Vector::Zero(k), kInf}; },
                               [](const Ball& b) { return std::pair<Vector, double>{b.center, b.radius}; },
                               [&](const Ellipsoid& e) { return base_ball(e); },
                               [&](const Box& b) { return base_ball(b); },
                               [&](const Offset& o) {
                                 auto [c, r] = std::visit(base_ball, o.base);
                                 return std::pair<Vector, double>{c, r + std::max(o.delta, 0.0)};
                               },
                               [&](const Empty&) { return std::pair<Vector, double>{Vector::Zero(k), -1.0}; }},
                    set.variant());
}

int preferred_axis(const ConvexSet& set) {
  if (const auto* h = std::get_if<HalfSpace>(&set.variant())) {
    Eigen::Index axis = 0;
    h->normal.cwiseAbs().maxCoeff(&axis);
    return static_cast<int>(axis);
  }
  return 0;
}

std::optional<Interval> line_section(const ConvexSet& set, const Vector& origin, int axis) {
  require_dim(set, origin);
  if (axis < 0 || axis >= set.dim()) throw DomainError("line_section: axis out of range");
  return std::visit(
      Overloaded{
          [&](const HalfSpace& h) -> std::optional<Interval> {
            if (h.offset == kInf) return Interval{-kInf, kInf};
            const double slope = h.normal(axis);
            const double slack = h.offset - h.normal.dot(origin);
            if (slope == 0.0) return slack >= 0.0 ? std::optional<Interval>(Interval{-kInf, kInf}) : std::nullopt;
            return slope > 0.0 ? Interval{-kInf, slack / slope} : Interval{slack / slope, kInf};
          },
          [&](const Ball& b) -> std::optional<Interval> {
            const Vector d = origin - b.center;
            return quadratic_section(1.0, d(axis), d.squaredNorm() - b.radius * b.radius);
          },
          [&](const Ellipsoid& e) -> std::optional<Interval> {
            const Vector d = origin - e.center;
            const Vector ad = e.inverse * d;
            return quadratic_section(e.inverse(axis, axis), ad(axis), d.dot(ad) - 1.0);
          },
          [&](const Box& b) -> std::optional<Interval> {
            for (Eigen::Index j = 0; j < origin.size(); ++j) {
              if (j == axis) continue;
              if (origin(j) < b.lower(j) || origin(j) > b.upper(j)) return std::nullopt;
            }
            return Interval{b.lower(axis) - origin(axis), b.upper(axis) - origin(axis)};
          },
          [&](const Offset& o) -> std::optional<Interval> {
            auto [c, r] = bounding_ball(set);
            const Vector d = origin - c;
            const auto outer = quadratic_section(1.0, d(axis), d.squaredNorm() - r * r);
            if (!outer) return std::nullopt;
            Vector p = origin;
            const double base_at = origin(axis);
            const auto g = [&](double tau) {
              p(axis) = base_at + tau;
              return base_signed_distance(o.base, p) - o.delta;
            };
            return convex_level_section(g, *outer);
          },
          [](const Empty&) -> std::optional<Interval> { return std::nullopt; }},
      set.variant());
}

}  // namespace stein

namespace stein {

bool has_slice_ranges(const ConvexSet& set) {
  return std::holds_alternative<Ball>(set.variant()) || std::holds_alternative<Ellipsoid>(set.variant()) ||
         std::holds_alternative<Box>(set.variant()) || set.is_empty();
}

std::optional<Interval> slice_range(const ConvexSet& set, const Vector& point, std::span<const int> free_axes,
                                    int axis) {
  require_dim(set, point);
  const int k = set.dim();
  std::vector<char> is_free(static_cast<std::size_t>(k), 0);
  for (const int j : free_axes) {
    if (j < 0 || j >= k) throw DomainError("slice_range: axis out of range");
    is_free[static_cast<std::size_t>(j)] = 1;
  }
  if (axis < 0 || axis >= k || !is_free[static_cast<std::size_t>(axis)])
    throw DomainError("slice_range: axis must be free");
  return std::visit(
      Overloaded{
          [&](const Ball& b) -> std::optional<Interval> {
            double r2 = b.radius * b.radius;
            for (int j = 0; j < k; ++j)
              if (!is_free[static_cast<std::size_t>(j)]) r2 -= std::pow(point(j) - b.center(j), 2);
            if (r2 < 0.0) return std::nullopt;
            const double r = std::sqrt(r2);
            return Interval{b.center(axis) - r, b.center(axis) + r};
          },
          [&](const Ellipsoid& e) -> std::optional<Interval> {
            // Slice of {d^T A d <= 1}: minimise over the free block, then the
            // projection half-width is sqrt((1 - q0) (A_gg^{-1})_aa).
            std::vector<int> g, f;
            int pos = 0;
            for (int j = 0; j < k; ++j) {
              if (is_free[static_cast<std::size_t>(j)]) {
                if (j == axis) pos = static_cast<int>(g.size());
                g.push_back(j);
              } else {
                f.push_back(j);
              }
            }
            const Matrix agg = e.inverse(g, g);
            Vector df(static_cast<Eigen::Index>(f.size()));
            for (std::size_t i = 0; i < f.size(); ++i) df(static_cast<Eigen::Index>(i)) = point(f[i]) - e.center(f[i]);
            const Eigen::LLT<Matrix> llt(agg);
            const Vector g0 = f.empty() ? Vector::Zero(static_cast<Eigen::Index>(g.size()))
                                        : Vector(-llt.solve(e.inverse(g, f) * df));
            const double q0 = f.empty() ? 0.0 : df.dot(e.inverse(f, f) * df) + df.dot(e.inverse(f, g) * g0);
            if (q0 > 1.0) return std::nullopt;
            const Matrix cov = llt.solve(Matrix::Identity(agg.rows(), agg.cols()));
            const double half = std::sqrt((1.0 - q0) * cov(pos, pos));
            const double mid = e.center(axis) + g0(pos);
            return Interval{mid - half, mid + half};
          },
          [&](const Box& b) -> std::optional<Interval> {
            for (int j = 0; j < k; ++j)
              if (!is_free[static_cast<std::size_t>(j)] && (point(j) < b.lower(j) || point(j) > b.upper(j)))
                return std::nullopt;
            return Interval{b.lower(axis), b.upper(axis)};
          },
          [](const Empty&) -> std::optional<Interval> { return std::nullopt; },
          [](const auto&) -> std::optional<Interval> {
            throw DomainError("slice_range: unsupported set variant");
          }},
      set.variant());
}

}  // namespace stein
