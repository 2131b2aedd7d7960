#include "stein/semigroup.hpp"

#include <cmath>

namespace stein {

SemigroupTime::SemigroupTime(double t) : t_(t) {
  if (!(t >= 0.0) || std::isinf(t)) throw DomainError("semigroup time must be finite and nonnegative");
}

TestFunction TestFunction::indicator(ConvexSet set) {
  TestFunction h;
  h.set_ = std::move(set);
  return h;
}

TestFunction TestFunction::smooth(Fn f) {
  TestFunction h;
  h.f_ = std::move(f);
  return h;
}

TestFunction TestFunction::smooth(Fn f, GradientFn gradient, Fn laplacian) {
  TestFunction h;
  h.f_ = std::move(f);
  h.gradient_ = std::move(gradient);
  h.laplacian_ = std::move(laplacian);
  return h;
}

double TestFunction::operator()(const Vector& x) const {
  if (set_) return contains(*set_, x) ? 1.0 : 0.0;
  return f_(x);
}

double transition_density(SemigroupTime t, const Vector& x, const Vector& y) {
  if (!(t.value() > 0.0)) throw DomainError("transition_density: t must be positive");
  if (x.size() != y.size()) throw DomainError("transition_density: dimension mismatch");
  const double var = -std::expm1(-2.0 * t.value());
  const double k = static_cast<double>(x.size());
  const double r2 = (y - t.decay() * x).squaredNorm();
  return std::exp(-0.5 * r2 / var - 0.5 * k * std::log(2.0 * std::numbers::pi * var));
}

double semigroup_apply(const TestFunction& h, SemigroupTime t, const Vector& x, const SectionIntegrator& quad) {
  if (t.value() == 0.0) return h(x);
  const Vector mean = t.decay() * x;
  if (h.is_indicator()) return quad.indicator_mass(h.set(), mean, t.spread());
  return quad.expectation([&](const Vector& y) { return h(y); }, mean, t.spread());
}

double semigroup_compose(const TestFunction& h, SemigroupTime t, SemigroupTime s, const Vector& x,
                         const SectionIntegrator& quad) {
  const auto inner = [&](const Vector& y) { return semigroup_apply(h, s, y, quad); };
  if (t.value() == 0.0) return inner(x);
  return quad.expectation(inner, t.decay() * x, t.spread());
}

double gaussian_mean(const TestFunction& h, const SectionIntegrator& quad) {
  const Vector origin = Vector::Zero(quad.dim());
  if (h.is_indicator()) return quad.indicator_mass(h.set(), origin, 1.0);
  return quad.expectation([&](const Vector& y) { return h(y); }, origin, 1.0);
}

double generator_apply(const std::function<double(const Vector&)>& g, const Vector& x, double dx) {
  if (!(dx > 0.0)) throw DomainError("generator_apply: step must be positive");
  const double center = g(x);
  double laplacian = 0.0;
  double drift = 0.0;
  Vector y = x;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    y(i) = x(i) + dx;
    const double up = g(y);
    y(i) = x(i) - dx;
    const double down = g(y);
    y(i) = x(i);
    laplacian += (up - 2.0 * center + down) / (dx * dx);
    drift += x(i) * (up - down) / (2.0 * dx);
  }
  return laplacian - drift;
}

double generator_apply(const TestFunction& g, const Vector& x, double dx) {
  if (g.is_indicator()) throw DomainError("generator_apply: an indicator is not in the generator domain");
  if (g.has_derivatives()) return g.laplacian(x) - x.dot(g.gradient(x));
  return generator_apply([&](const Vector& y) { return g(y); }, x, dx);
}

double backward_residual(const TestFunction& h, SemigroupTime t, const Vector& x, const SectionIntegrator& quad,
                         double dt, double dx) {
  if (!(t.value() > 0.0)) throw DomainError("backward_residual: t must be positive");
  if (!(dt > 0.0) || dt >= t.value()) throw DomainError("backward_residual: time step must lie in (0, t)");
  const double forward = semigroup_apply(h, SemigroupTime(t.value() + dt), x, quad);
  const double backward = semigroup_apply(h, SemigroupTime(t.value() - dt), x, quad);
  const double time_derivative = (forward - backward) / (2.0 * dt);
  const double generator =
      generator_apply([&](const Vector& y) { return semigroup_apply(h, t, y, quad); }, x, dx);
  return time_derivative - generator;
}

}  // namespace stein
