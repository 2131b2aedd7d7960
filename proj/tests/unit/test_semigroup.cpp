#include <gtest/gtest.h>

#include <cmath>

#include "stein/checks.hpp"
#include "stein/semigroup.hpp"

using namespace stein;

namespace {

void expect_all_pass(const std::vector<CheckResult>& results) {
  for (const auto& r : results)
    EXPECT_TRUE(r.passed) << r.suite << "/" << r.name << " value " << r.value << " tolerance " << r.tolerance;
}

}  // namespace

TEST(SemigroupTime, RejectsNegativeTime) {
  EXPECT_THROW(SemigroupTime(-0.1), DomainError);
  EXPECT_DOUBLE_EQ(SemigroupTime(0.0).spread(), 0.0);
}

TEST(TransitionDensity, ExplicitValue) {
  Vector x(1), y(1);
  x << 2.0;
  y << 1.0;
  EXPECT_NEAR(transition_density(SemigroupTime(std::log(2.0)), x, y), 0.46065886596178063, 1e-15);
}

TEST(TransitionDensity, StationaryLimit) {
  Vector x(2), y(2);
  x << 3.0, 0.0;
  y << -0.4, 1.2;
  EXPECT_NEAR(transition_density(SemigroupTime(20.0), x, y) / phi(y), 1.0, 1e-7);
}

TEST(SemigroupApply, HalfSpaceClosedForm) {
  const SectionIntegrator quad(2, default_inner_rule(2));
  Vector u(2);
  u << 0.6, 0.8;
  Vector x(2);
  x << 1.0, -0.5;
  const SemigroupTime t(0.3);
  const double expected = normal_cdf((0.2 - t.decay() * u.dot(x)) / t.spread());
  EXPECT_NEAR(semigroup_apply(TestFunction::indicator(ConvexSet::half_space(u, 0.2)), t, x, quad), expected, 1e-13);
}

TEST(SemigroupApply, TimeZeroIsIdentity) {
  const SectionIntegrator quad(1, default_inner_rule(1));
  const auto h = TestFunction::smooth([](const Vector& y) { return std::sin(y(0)); });
  Vector x(1);
  x << 0.4;
  EXPECT_DOUBLE_EQ(semigroup_apply(h, SemigroupTime(0.0), x, quad), std::sin(0.4));
}

TEST(GeneratorApply, EigenfunctionsExact) {
  const auto g = TestFunction::smooth(
      [](const Vector& y) { return y(0) * y(1); },
      [](const Vector& y) {
        Vector grad(2);
        grad << y(1), y(0);
        return grad;
      },
      [](const Vector&) { return 0.0; });
  Vector x(2);
  x << 0.7, -1.3;
  EXPECT_NEAR(generator_apply(g, x), -2.0 * x(0) * x(1), 1e-12);
  EXPECT_NEAR(generator_apply([](const Vector& y) { return y(1); }, x), -x(1), 1e-9);
  EXPECT_NEAR(generator_apply([](const Vector&) { return 1.0; }, x), 0.0, 1e-12);
}

TEST(GeneratorApply, IndicatorNeedsSmoothFunction) {
  EXPECT_THROW(generator_apply(TestFunction::indicator(ConvexSet::ball(Vector::Zero(2), 1.0)), Vector::Zero(2)),
               DomainError);
}

TEST(GaussianMean, CatalogMasses) {
  const SectionIntegrator quad(2, default_inner_rule(2));
  EXPECT_NEAR(gaussian_mean(TestFunction::indicator(ConvexSet::ball(Vector::Zero(2), 1.0)), quad), chi_cdf(1.0, 2),
              1e-12);
}

TEST(SemigroupSuite, PassesInOneAndTwoDimensions) {
  expect_all_pass(semigroup_checks(1, 1));
  expect_all_pass(semigroup_checks(2, 2));
}

TEST(SemigroupSuite, RejectsLargeDimension) { EXPECT_THROW(semigroup_checks(4, 1), ConfigError); }
