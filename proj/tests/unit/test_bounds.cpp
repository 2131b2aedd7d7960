#include <gtest/gtest.h>

#include <cmath>

#include "stein/bounds.hpp"
#include "stein/family.hpp"

using namespace stein;

TEST(Constants, JsonOverridesAndValidation) {
  const ConstantsConfig c = constants_from_json(nlohmann::json{{"c7", 2.5}, {"c", 3.0}});
  EXPECT_EQ(c.c7, 2.5);
  EXPECT_EQ(c.c, 3.0);
  EXPECT_EQ(c.c1, 1.0);
  EXPECT_THROW(constants_from_json(nlohmann::json{{"c11", 1.0}}), ConfigError);
  EXPECT_THROW(constants_from_json(nlohmann::json{{"c1", "big"}}), ConfigError);
  EXPECT_THROW(constants_from_json(nlohmann::json{{"c2", -1.0}}), ConfigError);
  EXPECT_EQ(constants_from_json(to_json(c)).c7, 2.5);
}

TEST(Rhs316, ArithmeticAndFunctionalForm) {
  const ConstantsConfig c;
  EXPECT_NEAR(rhs_316(1, 1.0, 100, 1.0, 1.0, c), 0.2, 1e-15);
  EXPECT_NEAR(rhs_316(2, 1.5, 50, 0.3, 0.0, c), std::pow(2.0, 2.5) * 1.5 / std::sqrt(50.0), 1e-14);
  const double second = rhs_316(3, 2.0, 40, 0.4, 0.0, c);
  const double first_t = rhs_316(3, 2.0, 40, 0.4, 0.3, c) - second;
  const double first_2t = rhs_316(3, 2.0, 40, 0.8, 0.3, c) - second;
  EXPECT_NEAR(first_2t / first_t, 1.0 / std::sqrt(2.0), 1e-14);
  EXPECT_THROW(rhs_316(1, 1.0, 1, 1.0, 0.5, c), DomainError);
}

TEST(Smoothing, PrefactorAndBound) {
  EXPECT_EQ(smoothing_prefactor(7.0 / 8.0), 4.0 / 3.0);
  EXPECT_NEAR(smoothing_bound(0.3, 0.15, 7.0 / 8.0), 0.6, 1e-15);
  EXPECT_EQ(smoothing_bound(0.0, 0.0, 7.0 / 8.0), 0.0);
  for (double g : {0.01, 0.2, 0.7})
    for (double w : {0.0, 0.05, 0.3}) EXPECT_EQ(smoothing_bound(g, w, 7.0 / 8.0), (4.0 / 3.0) * (g + w));
  EXPECT_THROW(smoothing_prefactor(0.5), HypothesisError);
  EXPECT_GT(smoothing_prefactor(0.5 + 1e-9), 1e8);
}

TEST(Smoothing, ParamsUseChiQuantile) {
  double c4 = 0.0;
  for (int k = 1; k <= 64; ++k) c4 = std::max(c4, quantile_a(k).a_k / std::sqrt(k));
  for (int k : {1, 3, 10}) {
    for (double t : {0.01, 0.5, 2.0}) {
      const SmoothingParams p = SmoothingParams::make(k, SemigroupTime(t));
      EXPECT_DOUBLE_EQ(p.eps, quantile_a(k).a_k * std::sqrt(-std::expm1(-2.0 * t)));
      EXPECT_LE(p.eps, c4 * std::sqrt(k) * std::sqrt(2.0 * t));
    }
  }
  EXPECT_NEAR(SmoothingParams::make(3, SemigroupTime(0.5)).eps, 1.9047312709852313, 1e-9);
  EXPECT_THROW(SmoothingParams::make(2, SemigroupTime(0.5), 0.4), HypothesisError);
}

TEST(OmegaStar, HalfLineClosedForm) {
  Vector u(1);
  u << 1.0;
  const ConvexSet half = ConvexSet::half_space(u, 0.0);
  EXPECT_NEAR(omega_star_hat(half, 0.05, SemigroupTime(0.1)).value, 0.08800070440246599, 1e-14);
  EXPECT_EQ(omega_star_hat(half, 0.0, SemigroupTime(0.1)).value, 0.0);
  EXPECT_GT(omega_star_ratio(half, 0.05, SemigroupTime(0.1)), 0.0);
}

TEST(OptimalT, ClampAndFloor) {
  EXPECT_EQ(optimal_t(1, 3.0, 1, 1.0), 1.0);
  EXPECT_NEAR(optimal_t(1, 1.0, 100, 0.1), 0.01, 1e-16);
  EXPECT_EQ(optimal_t(2, 1.0, 100, 0.0), kMinimumTime);
}

TEST(TheoremBound, ArithmeticAndMonotonicity) {
  const ConstantsConfig c;
  EXPECT_EQ(theorem_bound(1, 1.0, 4, c), 0.5);
  for (int n = 2; n < 50; ++n) EXPECT_LT(theorem_bound(2, 2.0, n + 1, c), theorem_bound(2, 2.0, n, c));
  EXPECT_LT(theorem_bound(2, 2.0, 10, c), theorem_bound(3, 2.0, 10, c));
  EXPECT_LT(theorem_bound(2, 2.0, 10, c), theorem_bound(2, 2.5, 10, c));
}

TEST(NonIidBounds, GammaBoundConsistentWithBetaBound) {
  const ConstantsConfig c;
  EXPECT_THROW(noniid_bound(2, 1.0, c), HypothesisError);
  for (int k : {1, 2, 4})
    for (double beta : {0.05, 0.3, 0.9}) {
      const double gamma = std::pow(k, 1.5) * beta;  // extreme case of gamma3 <= k^{3/2} beta3
      EXPECT_NEAR(gamma_bound(k, gamma, c), noniid_bound(k, beta, c), 1e-14);
      EXPECT_LE(gamma_bound(k, 0.5 * gamma, c), noniid_bound(k, beta, c));
    }
}

TEST(Rhs412, SubstitutedPreviousBound) {
  const ConstantsConfig c;
  const int k = 2, n = 50;
  const double rho = 2.0;
  const double prev = theorem_bound(k, rho, n - 1, c);
  // sqrt(prev) = k^{5/4} rho^{1/2} (n - 1)^{-1/4}
  const double expected = std::pow(k, 2.5) * rho / std::pow(n - 1.0, 0.25) / std::pow(n, 0.25) +
                          std::pow(k, 1.5) * rho / std::sqrt(n);
  EXPECT_NEAR(rhs_412(k, rho, n, prev, c), expected, 1e-13);
}

TEST(Induction, GoldenRatioFixedPoint) {
  const double golden = 0.5 * (1.0 + std::sqrt(5.0));
  EXPECT_NEAR(induction_constant(1.0, 1.0), golden * golden, 1e-12);
  EXPECT_NEAR(induction_constant(2.0, 3.0), 9.0, 1e-12);
}

TEST(Induction, EnvelopeHoldsWithLinkedConstants) {
  const ConstantsConfig c;
  for (int k = 1; k <= 6; ++k) {
    const RecursionCertificate cert = recursion_certify(k, std::pow(k, 1.5), 100000, c);
    EXPECT_TRUE(cert.envelope_holds) << k;
    EXPECT_EQ(cert.c9_used, 0.0);
    EXPECT_EQ(cert.n_star, 2);
    for (std::size_t i = static_cast<std::size_t>(cert.n_star); i < cert.sequence.size(); ++i)
      EXPECT_LE(cert.sequence[i], cert.sequence[i - 1]);
  }
}

TEST(Induction, ConfiguredSecondConstantFailsInDimensionOne) {
  const ConstantsConfig c;
  const RecursionCertificate one = recursion_certify(1, 1.0, 10000, c, c.c9);
  EXPECT_FALSE(one.envelope_holds);
  EXPECT_LT(one.worst_margin, 0.0);
  const RecursionCertificate two = recursion_certify(2, std::pow(2.0, 1.5), 10000, c, c.c9);
  EXPECT_TRUE(two.envelope_holds);
}

TEST(EvaluateBounds, RademacherReport) {
  const BoundReport r = evaluate_bounds(SourceDistribution(SourceKind::Rademacher, 2), 16, 0.1, 0.0, ConstantsConfig{});
  EXPECT_DOUBLE_EQ(r.rho3, std::pow(2.0, 1.5));
  EXPECT_NEAR(r.beta3, std::pow(2.0, 1.5) / 4.0, 1e-15);
  EXPECT_NEAR(r.gamma3, 2.0, 1e-14);
  EXPECT_LE(r.gamma3, std::pow(2.0, 1.5) * r.beta3 * (1 + 1e-14));
  EXPECT_EQ(r.t, r.optimal_t);
  ASSERT_TRUE(r.noniid_bound.has_value());
  EXPECT_NEAR(r.theorem_bound, std::pow(2.0, 2.5) * r.rho3 / 4.0, 1e-14);
}

TEST(GammaStar, GaussianNullAndZeroWidthReduction) {
  const SumLaw gauss = SumLaw::iid(SourceDistribution(SourceKind::Gaussian, 2), 4);
  const ConvexSet ball = ConvexSet::ball(Vector::Zero(2), 1.2);
  const SmoothingParams p = SmoothingParams::make(2, SemigroupTime(0.3));
  const Estimate g = gamma_star_hat(gauss, p, ball, translate_grid(2), 20000, default_inner_rule(2), 4);
  EXPECT_LE(g.value, 4.0 * g.std_error * std::sqrt(2.0 * std::log(20.0)));

  SmoothingParams flat = p;
  flat.eps = 0.0;
  const SumLaw rad = SumLaw::iid(SourceDistribution(SourceKind::Rademacher, 2), 4);
  const Estimate g0 = gamma_star_hat(rad, flat, ball, {Vector::Zero(2)}, 5000, default_inner_rule(2), 8);
  const Estimate direct = smoothed_discrepancy_hat(rad, p.t, ball, 5000, default_inner_rule(2), 8);
  EXPECT_NEAR(g0.value, std::abs(direct.value), 1e-12);
}

TEST(FitLogSlope, RecoversPowerLawAndFlagsNoise) {
  std::vector<double> x{4, 16, 64, 256};
  std::vector<DeltaEstimate> d(4);
  for (std::size_t i = 0; i < 4; ++i) {
    d[i].value = 0.8 / std::sqrt(x[i]);
    d[i].std_error = 1e-4;
    d[i].max_set_error = 1e-4;
  }
  const ExponentFit fit = fit_log_slope(x, d);
  ASSERT_TRUE(fit.defined);
  EXPECT_NEAR(fit.slope, -0.5, 1e-10);
  for (auto& e : d) e.value = 1e-4;
  EXPECT_FALSE(fit_log_slope(x, d).defined);
}

TEST(DimScan, GaussianExponentUndefined) {
  const auto family_for = [](int k) {
    FamilySpec s;
    s.k = k;
    s.halfspace_directions = 4;
    s.halfspace_offsets = 5;
    s.ball_radii = 3;
    s.box_sizes = 3;
    return build_family(s);
  };
  const ScanReport r = dim_scan({SourceKind::Gaussian}, {1, 2}, {4, 16}, family_for, 20000, 3);
  EXPECT_EQ(r.cells.size(), 4u);
  for (const auto& f : r.k_fits) EXPECT_FALSE(f.defined);
  EXPECT_NE(cell_seed(3, SourceKind::Gaussian, 1, 4), cell_seed(3, SourceKind::Gaussian, 1, 16));
  const ScanReport again = dim_scan({SourceKind::Gaussian}, {1, 2}, {4, 16}, family_for, 20000, 3);
  for (std::size_t i = 0; i < r.cells.size(); ++i) EXPECT_EQ(r.cells[i].delta.value, again.cells[i].delta.value);
}
