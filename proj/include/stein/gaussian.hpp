#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <numbers>

#include "stein/errors.hpp"
#include "stein/rng.hpp"

namespace stein {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

inline constexpr double kInvSqrt2Pi = 0.3989422804014326779399460599343819;
inline constexpr double kSevenEighths = 7.0 / 8.0;
inline constexpr double kInvSqrt2 = 0.7071067811865475244008443621048490;

inline double normal_pdf(double z) { return std::isinf(z) ? 0.0 : kInvSqrt2Pi * std::exp(-0.5 * z * z); }
inline double normal_cdf(double z) { return 0.5 * std::erfc(-z * kInvSqrt2); }
/// Upper tail 1 - Phi(z) without cancellation.
inline double normal_sf(double z) { return 0.5 * std::erfc(z * kInvSqrt2); }
/// Phi(b) - Phi(a) for a <= b, evaluated on the tail that avoids cancellation.
inline double normal_interval(double a, double b) {
  if (a >= b) return 0.0;
  if (a > 0.0) return normal_sf(a) - normal_sf(b);
  return normal_cdf(b) - normal_cdf(a);
}
/// Inverse of Phi on (0, 1).
double normal_quantile(double p);

/// Probabilists' Hermite polynomial He_m(z); D^m phi(z) = (-1)^m He_m(z) phi(z).
template <class Scalar>
Scalar hermite_he(int m, Scalar z) {
  if (m == 0) return Scalar(1);
  Scalar prev(1);
  Scalar cur = z;
  for (int j = 1; j < m; ++j) {
    const Scalar next = z * cur - Scalar(j) * prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

/// Up to three coordinate axes naming a mixed partial derivative. Axes are
/// zero-based; order does not matter (mixed partials commute).
class MultiIndex {
 public:
  MultiIndex() = default;
  MultiIndex(std::initializer_list<int> axes);

  int order() const { return order_; }
  int operator[](int slot) const { return axes_[static_cast<std::size_t>(slot)]; }
  /// How many times `axis` occurs.
  int multiplicity(int axis) const;
  /// Throws DomainError unless every axis lies in [0, k).
  void validate(int k) const;

  friend bool operator==(const MultiIndex& a, const MultiIndex& b);

 private:
  std::array<int, 3> axes_{0, 0, 0};
  int order_ = 0;
};

/// Standard k-dimensional normal density, k = x.size().
template <class Derived>
typename Derived::Scalar phi(const Eigen::MatrixBase<Derived>& x) {
  using Scalar = typename Derived::Scalar;
  if (x.size() == 0) throw DomainError("phi: empty vector");
  if (!x.allFinite()) throw DomainError("phi: non-finite coordinate");
  const Scalar k = Scalar(x.size());
  using std::exp;
  using std::log;
  return exp(-x.squaredNorm() / Scalar(2) - k / Scalar(2) * log(Scalar(2) * std::numbers::pi_v<Scalar>));
}

/// Mixed partial D^idx phi(x) via the product of Hermite factors.
template <class Derived>
typename Derived::Scalar d_phi(const Eigen::MatrixBase<Derived>& x, const MultiIndex& idx) {
  using Scalar = typename Derived::Scalar;
  idx.validate(static_cast<int>(x.size()));
  // Axes in increasing order so that every permutation of idx rounds alike.
  std::array<int, 3> axes{};
  const int order = idx.order();
  for (int slot = 0; slot < order; ++slot) axes[static_cast<std::size_t>(slot)] = idx[slot];
  std::sort(axes.begin(), axes.begin() + order);
  Scalar factor(1);
  for (int slot = 0; slot < order; ++slot) {
    const int axis = axes[static_cast<std::size_t>(slot)];
    if (slot > 0 && axes[static_cast<std::size_t>(slot - 1)] == axis) continue;
    const int m = idx.multiplicity(axis);
    const Scalar sign = (m % 2 == 0) ? Scalar(1) : Scalar(-1);
    factor *= sign * hermite_he(m, x(axis));
  }
  return factor * phi(x);
}

/// Third mixed partial of phi. idx must have order three.
template <class Derived>
typename Derived::Scalar d3_phi(const Eigen::MatrixBase<Derived>& x, const MultiIndex& idx) {
  if (idx.order() != 3) throw DomainError("d3_phi: index must have three entries");
  return d_phi(x, idx);
}

/// Shapes of third-order multi-indices up to permutation.
enum class IndexPattern { AllDistinct, Pair, Triple };

IndexPattern pattern_of(const MultiIndex& idx);

/// Integral over the real line of |He_m(z)| phi(z), m <= 3, from the
/// antiderivative -He_{m-1} phi split at the real roots of He_m.
double abs_hermite_integral(int m);

/// Integral over R^k of |D_idx phi|. Factorizes over coordinates, so only the
/// pattern matters; k must be at least the number of distinct axes.
double abs_d3_integral(IndexPattern pattern, int k);
double abs_d3_integral(const MultiIndex& idx, int k);

/// Regularized lower incomplete gamma P(a, x).
double regularized_gamma_p(double a, double x);
/// Regularized upper incomplete gamma Q(a, x) = 1 - P(a, x).
double regularized_gamma_q(double a, double x);

/// P(|Z| <= r) for Z ~ N(0, I_k).
double chi_cdf(double r, int k);
double chi_sf(double r, int k);
double chi_pdf(double r, int k);

struct QuantileResult {
  int k = 0;
  double a_k = 0.0;
  double achieved_mass = 0.0;
};

/// Radius a_k with P(|Z| < a_k) = mass, by bracketing and bisection.
QuantileResult quantile_a(int k, double mass = kSevenEighths);

/// n iid N(0, I_k) draws as the columns of a k x n matrix.
Matrix sample_std_normal(std::size_t n_samples, int k, RngStream& stream);

}  // namespace stein
