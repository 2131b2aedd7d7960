#pragma once

#include <cmath>
#include <functional>
#include <optional>

#include "stein/convex.hpp"
#include "stein/integrator.hpp"

namespace stein {

/// Ornstein-Uhlenbeck time. Zero is allowed (identity checks), negative is not.
class SemigroupTime {
 public:
  explicit SemigroupTime(double t);
  double value() const { return t_; }
  /// e^{-t}
  double decay() const { return std::exp(-t_); }
  /// sqrt(1 - e^{-2t})
  double spread() const { return std::sqrt(-std::expm1(-2.0 * t_)); }

 private:
  double t_;
};

/// A test function h: either the indicator of a convex set or a smooth
/// function, optionally with exact gradient and Laplacian.
class TestFunction {
 public:
  using Fn = std::function<double(const Vector&)>;
  using GradientFn = std::function<Vector(const Vector&)>;

  static TestFunction indicator(ConvexSet set);
  static TestFunction smooth(Fn f);
  static TestFunction smooth(Fn f, GradientFn gradient, Fn laplacian);

  double operator()(const Vector& x) const;

  bool is_indicator() const { return set_.has_value(); }
  const ConvexSet& set() const { return *set_; }
  bool has_derivatives() const { return static_cast<bool>(gradient_) && static_cast<bool>(laplacian_); }
  Vector gradient(const Vector& x) const { return gradient_(x); }
  double laplacian(const Vector& x) const { return laplacian_(x); }

 private:
  std::optional<ConvexSet> set_;
  Fn f_;
  GradientFn gradient_;
  Fn laplacian_;
};

/// p(t; x, y): density of N(e^{-t} x, (1 - e^{-2t}) I_k) at y.
double transition_density(SemigroupTime t, const Vector& x, const Vector& y);

/// T_t h(x) = E h(e^{-t} x + sqrt(1 - e^{-2t}) Z). T_0 h = h exactly.
double semigroup_apply(const TestFunction& h, SemigroupTime t, const Vector& x, const SectionIntegrator& quad);

/// T_t (T_s h)(x), the outer expectation by the full inner rule.
double semigroup_compose(const TestFunction& h, SemigroupTime t, SemigroupTime s, const Vector& x,
                         const SectionIntegrator& quad);

/// Integral of h against the standard normal using the same rule as
/// semigroup_apply, so that T_s h - mean vanishes as s grows.
double gaussian_mean(const TestFunction& h, const SectionIntegrator& quad);

/// L g(x) = Laplacian g(x) - x . grad g(x); exact derivatives when the test
/// function carries them, central differences with step `dx` otherwise.
double generator_apply(const TestFunction& g, const Vector& x, double dx = 1e-3);
double generator_apply(const std::function<double(const Vector&)>& g, const Vector& x, double dx = 1e-3);

/// d/dt T_t h(x) - L T_t h(x), both by central differences.
double backward_residual(const TestFunction& h, SemigroupTime t, const Vector& x, const SectionIntegrator& quad,
                         double dt = 1e-3, double dx = 1e-3);

}  // namespace stein
