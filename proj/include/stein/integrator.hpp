#pragma once

#include <cstdint>
#include <functional>
#include <span>

#include "stein/convex.hpp"
#include "stein/gaussian.hpp"

namespace stein {

enum class InnerMethod { GaussHermite, MonteCarlo };

/// How expectations over Z ~ N(0, I_k) are discretized.
struct InnerRule {
  InnerMethod method = InnerMethod::GaussHermite;
  int nodes = 32;               ///< Gauss-Hermite nodes per axis
  std::size_t samples = 1 << 16;  ///< Monte Carlo sample count
  std::uint64_t seed = 0x5eedULL;
};

/// Tensor Gauss-Hermite cost above which a rule is rejected.
inline constexpr std::size_t kMaxTensorPoints = std::size_t{1} << 20;

/// Cubature points (columns) and weights for N(0, I_dims). dims = 0 yields a
/// single empty point of weight one.
struct PointRule {
  Matrix points;
  Vector weights;
};

PointRule make_point_rule(int dims, const InnerRule& rule);

/// The default inner rule for dimension k: tensor Gauss-Hermite with 32
/// nodes per axis for k <= 3, Monte Carlo with 2^16 samples above.
InnerRule default_inner_rule(int k);

/// Gaussian expectations of indicator-weighted Hermite polynomials.
///
/// Every line meets a convex set in an interval, so along one axis the
/// integral of 1_C(mu + sigma z) He_m(z) phi(z) is a difference of
/// antiderivative values. Only the remaining k - 1 axes are discretized with
/// the inner rule; for k = 1 the result is exact.
class SectionIntegrator {
 public:
  SectionIntegrator(int k, InnerRule rule);

  int dim() const { return k_; }
  const InnerRule& rule() const { return rule_; }

  /// out[a] = E[1_C(mu + sigma Z) He_{alphas[a]}(Z)] for Z ~ N(0, I_k),
  /// with He_alpha the product of He_{m_j}(z_j) over the axis multiplicities.
  void indicator_moments(const ConvexSet& set, const Vector& mu, double sigma, std::span<const MultiIndex> alphas,
                         std::span<double> out) const;

  /// P(mu + sigma Z in C).
  double indicator_mass(const ConvexSet& set, const Vector& mu, double sigma) const;

  /// E f(mu + sigma Z) with the full k-dimensional rule.
  double expectation(const std::function<double(const Vector&)>& f, const Vector& mu, double sigma) const;

  const PointRule& full_rule() const { return full_; }

 private:
  PointRule slice_rule(const ConvexSet& set, const Vector& mu, double sigma, int axis) const;

  int k_;
  InnerRule rule_;
  PointRule remaining_;
  PointRule full_;
};

/// Integral of He_m(z) phi(z) over [lo, hi], m <= 3; endpoints may be infinite.
double truncated_hermite_moment(int m, double lo, double hi);

}  // namespace stein
