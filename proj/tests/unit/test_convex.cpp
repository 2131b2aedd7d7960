#include <gtest/gtest.h>

#include <cmath>

#include "stein/convex.hpp"
#include "stein/family.hpp"
#include "stein/measure.hpp"
#include "stein/rng.hpp"

using namespace stein;

namespace {

Vector v2(double a, double b) {
  Vector x(2);
  x << a, b;
  return x;
}

std::vector<ConvexSet> catalog(int k) {
  Matrix shape = Matrix::Identity(k, k);
  shape(0, 0) = 2.0;
  if (k > 1) shape(0, 1) = shape(1, 0) = 0.5;
  return {ConvexSet::half_space(Vector::Ones(k).normalized(), 0.4),
          ConvexSet::ball(Vector::Constant(k, 0.3), 1.1),
          ConvexSet::ellipsoid(Vector::Constant(k, -0.2), shape),
          ConvexSet::box(Vector::Constant(k, -0.7), Vector::Constant(k, 1.3))};
}

}  // namespace

TEST(Contains, BasicMembership) {
  EXPECT_TRUE(contains(ConvexSet::ball(Vector::Zero(2), 1.0), Vector::Zero(2)));
  EXPECT_TRUE(contains(ConvexSet::half_space(Vector::Unit(2, 0), 0.0), v2(0.0, 5.0)));
  Matrix shape = Matrix::Zero(2, 2);
  shape.diagonal() << 1.0, 4.0;
  EXPECT_TRUE(contains(ConvexSet::ellipsoid(Vector::Zero(2), shape), v2(0.0, 1.9)));
  EXPECT_FALSE(contains(ConvexSet::ellipsoid(Vector::Zero(2), shape), v2(0.0, 2.1)));
  EXPECT_FALSE(contains(ConvexSet::empty(2), Vector::Zero(2)));
  EXPECT_TRUE(contains(ConvexSet::whole_space(2), v2(1e9, -1e9)));
}

TEST(Contains, RejectsDimensionMismatch) {
  EXPECT_THROW(contains(ConvexSet::ball(Vector::Zero(2), 1.0), Vector::Zero(3)), DomainError);
}

TEST(Construction, RejectsInvalidShapes) {
  EXPECT_THROW(ConvexSet::ball(Vector::Zero(2), -1.0), DomainError);
  EXPECT_THROW(ConvexSet::half_space(Vector::Zero(2), 0.0), DomainError);
  EXPECT_THROW(ConvexSet::box(Vector::Ones(2), Vector::Zero(2)), DomainError);
  Matrix indefinite = Matrix::Identity(2, 2);
  indefinite(1, 1) = -1.0;
  EXPECT_THROW(ConvexSet::ellipsoid(Vector::Zero(2), indefinite), DomainError);
}

TEST(Dilate, ZeroIsIdentityAndBallGrows) {
  RngStream rng(7);
  for (const auto& set : catalog(2)) {
    const ConvexSet same = dilate(set, 0.0);
    for (int p = 0; p < 200; ++p) {
      const Vector x = v2(2.0 * rng.normal(), 2.0 * rng.normal());
      EXPECT_EQ(contains(same, x), contains(set, x));
    }
  }
  const ConvexSet grown = dilate(ConvexSet::ball(Vector::Zero(2), 1.0), 0.5);
  const auto& ball = std::get<Ball>(grown.variant());
  EXPECT_DOUBLE_EQ(ball.radius, 1.5);
}

TEST(Dilate, BoxCornerUsesEuclideanDistance) {
  const ConvexSet box = ConvexSet::box(-Vector::Ones(2), Vector::Ones(2));
  EXPECT_TRUE(contains(dilate(box, 0.3), v2(1.2, 1.2)));
  EXPECT_FALSE(contains(dilate(box, 0.28), v2(1.2, 1.2)));
}

TEST(Erode, CollapsesAndTranslates) {
  EXPECT_TRUE(erode(ConvexSet::ball(Vector::Zero(2), 1.0), 1.0).is_empty());
  EXPECT_TRUE(erode(ConvexSet::box(Vector::Zero(2), Vector::Ones(2)), 0.5).is_empty());
  EXPECT_DOUBLE_EQ(gaussian_measure(erode(ConvexSet::ball(Vector::Zero(3), 1.0), 1.0)).value, 0.0);
  const ConvexSet half = erode(ConvexSet::half_space(Vector::Unit(2, 0), 2.0), 0.5);
  EXPECT_DOUBLE_EQ(std::get<HalfSpace>(half.variant()).offset, 1.5);
}

TEST(DilateErode, SandwichOnCatalog) {
  RngStream rng(11);
  for (int k : {1, 2, 3}) {
    for (const auto& set : catalog(k)) {
      for (double eps : {0.05, 0.3, 1.0}) {
        const ConvexSet in = erode(set, eps);
        const ConvexSet out = dilate(set, eps);
        for (int p = 0; p < 1000; ++p) {
          Vector x(k);
          for (int i = 0; i < k; ++i) x(i) = 1.5 * rng.normal();
          if (contains(in, x)) EXPECT_TRUE(contains(set, x)) << set.kind();
          if (contains(set, x)) EXPECT_TRUE(contains(out, x)) << set.kind();
        }
      }
    }
  }
}

TEST(DilateErode, MatchSignedDistance) {
  // 1 on the eps-neighbourhood / eps-interior, measured through signed_distance.
  RngStream rng(13);
  for (const auto& set : catalog(2)) {
    for (double eps : {0.1, 0.4}) {
      const ConvexSet out = dilate(set, eps);
      const ConvexSet in = erode(set, eps);
      for (int p = 0; p < 500; ++p) {
        const Vector x = v2(1.5 * rng.normal(), 1.5 * rng.normal());
        const double d = signed_distance(set, x);
        if (std::abs(d - eps) > 1e-9) EXPECT_EQ(contains(out, x), d <= eps) << set.kind();
        if (std::abs(d + eps) > 1e-9) EXPECT_EQ(contains(in, x), d <= -eps) << set.kind();
      }
    }
  }
}

TEST(Transform, TranslateAndScaleKeepVariant) {
  const Vector shift = v2(0.5, -1.0);
  for (const auto& set : catalog(2)) {
    EXPECT_EQ(translate(set, shift).variant().index(), set.variant().index());
    EXPECT_EQ(scale(set, 2.0).variant().index(), set.variant().index());
    const Vector x = v2(0.2, 0.1);
    EXPECT_EQ(contains(translate(set, shift), x + shift), contains(set, x));
    EXPECT_EQ(contains(scale(set, 2.0), 2.0 * x), contains(set, x));
  }
}

TEST(LineSection, BallChord) {
  const auto chord = line_section(ConvexSet::ball(Vector::Zero(2), 1.0), v2(0.0, 0.6), 0);
  ASSERT_TRUE(chord.has_value());
  EXPECT_NEAR(chord->lo, -0.8, 1e-15);
  EXPECT_NEAR(chord->hi, 0.8, 1e-15);
  EXPECT_FALSE(line_section(ConvexSet::ball(Vector::Zero(2), 1.0), v2(0.0, 1.5), 0).has_value());
}

TEST(SliceRange, BallAndEllipsoidProjections) {
  const std::vector<int> free_axes{0, 1};
  const Vector point = 0.6 * Vector::Unit(3, 2);
  const auto ball = slice_range(ConvexSet::ball(Vector::Zero(3), 1.0), point, free_axes, 1);
  ASSERT_TRUE(ball.has_value());
  EXPECT_NEAR(ball->hi, 0.8, 1e-15);
  Matrix shape = Matrix::Zero(2, 2);
  shape.diagonal() << 1.0, 4.0;
  const std::vector<int> one{1};
  const auto ell = slice_range(ConvexSet::ellipsoid(Vector::Zero(2), shape), v2(0.6, 0.0), one, 1);
  ASSERT_TRUE(ell.has_value());
  EXPECT_NEAR(ell->hi, 1.6, 1e-14);
  EXPECT_NEAR(ell->lo, -1.6, 1e-14);
}

TEST(ShellMeasure, HalfSpaceBand) {
  const ConvexSet half = ConvexSet::half_space(Vector::Unit(2, 0), 0.0);
  EXPECT_NEAR(shell_measure(half, 0.1, 1.0).value, 0.15851941887820598, 1e-14);
  EXPECT_EQ(shell_measure(half, 0.0, 1.0).value, 0.0);
}

TEST(ShellMeasure, MonotoneInEps) {
  for (const auto& set : catalog(2)) {
    double prev = 0.0;
    for (double eps : {0.0, 0.02, 0.05, 0.1, 0.2, 0.4}) {
      const auto m = shell_measure(set, eps, 1.0);
      EXPECT_GE(m.value + 4.0 * m.std_error, prev) << set.kind();
      prev = m.value;
    }
  }
}

TEST(ShellMeasure, SmallBallShellNearChiDensity) {
  const int k = 3;
  const double a = quantile_a(k).a_k;
  const double eps = 0.01;
  const auto m = shell_measure(ConvexSet::ball(Vector::Zero(k), a), eps, 1.0);
  EXPECT_NEAR(m.value, chi_cdf(a + 2 * eps, k) - chi_cdf(a - 2 * eps, k), 1e-12);
  EXPECT_NEAR(m.value, 4.0 * eps * chi_pdf(a, k), 1e-4);
}

TEST(GaussianMeasure, DilationIncreasesMass) {
  for (int k : {1, 2, 3}) {
    for (const auto& set : catalog(k)) {
      const auto base = gaussian_measure(set);
      for (double eps : {0.05, 0.5}) {
        const auto grown = gaussian_measure(dilate(set, eps));
        EXPECT_GE(grown.value + 4.0 * (grown.std_error + base.std_error), base.value) << set.kind();
      }
    }
  }
}

TEST(Family, DefaultSizeAndDeterminism) {
  FamilySpec spec;
  spec.k = 3;
  const SetFamily a = build_family(spec);
  const SetFamily b = build_family(spec);
  EXPECT_EQ(a.sets.size(), 32u * 17u + 17u + 9u);
  EXPECT_EQ(a.dim(), 3);
  for (std::size_t i = 0; i < a.sets.size(); ++i) EXPECT_EQ(to_json(a.sets[i]), to_json(b.sets[i]));
}

TEST(Family, JsonRoundTrip) {
  for (const auto& set : catalog(2)) {
    const ConvexSet back = convex_set_from_json(to_json(set));
    EXPECT_EQ(to_json(back), to_json(set));
  }
  FamilySpec spec;
  spec.k = 2;
  spec.extra.push_back(ConvexSet::box(-Vector::Ones(2), Vector::Ones(2)));
  const FamilySpec back = family_spec_from_json(to_json(spec));
  EXPECT_EQ(to_json(back), to_json(spec));
  EXPECT_THROW(convex_set_from_json(nlohmann::json{{"variant", "torus"}}), ConfigError);
}

TEST(Family, TranslateGrid) {
  const auto grid = translate_grid(3, 0.5);
  EXPECT_EQ(grid.size(), 7u);
  EXPECT_TRUE(grid.front().isZero());
}
