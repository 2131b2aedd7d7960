#pragma once

#include <span>
#include <vector>

#include "stein/convex.hpp"
#include "stein/integrator.hpp"
#include "stein/semigroup.hpp"

namespace stein {

/// How the outer s-integral of psi_t is discretized.
enum class STransform {
  ExpSubstitution,  ///< u = e^{-s}, Gauss-Legendre on [e^{-s_max}, e^{-t}]
  Direct,           ///< composite Gauss-Legendre in s on graded panels
};

struct QuadratureSpec {
  double s_truncation_offset = 40.0;  ///< integrate s over [t, t + offset]
  int s_nodes = 64;
  InnerRule inner{};
  STransform transform = STransform::ExpSubstitution;

  /// Throws ConfigError unless offset >= 10 and s_nodes >= 16.
  void validate() const;
};

/// Defaults for dimension k (Gauss-Hermite inner rule for k <= 3).
QuadratureSpec default_quadrature(int k);

/// e^{-s} / sqrt(1 - e^{-2s}), the factor each x-derivative of T_s picks up.
double kernel_weight(double s);

/// Integral of kernel_weight(s)^m over [t, inf), by adaptive quadrature in
/// the variable theta = asin(e^{-s}), where the integrand is tan^{m-1}.
/// m = 1 allows t = 0.
double kernel_weight_tail(int m, double t, double tol = 1e-12);

/// psi_t = L^{-1} T_t h~ = -int_t^inf T_s h~ ds for h = 1_C, with its
/// derivatives from the kernel representation
///   D^alpha psi_t(x) = -int_t^inf w(s)^m E[1_C(e^{-s} x + sqrt(1 - e^{-2s}) Z) He_alpha(Z)] ds,
/// m = |alpha| >= 1, w = kernel_weight.
class SteinSolution {
 public:
  SteinSolution(ConvexSet set, SemigroupTime t, QuadratureSpec quad);
  SteinSolution(ConvexSet set, SemigroupTime t) : SteinSolution(set, t, default_quadrature(set.dim())) {}

  const ConvexSet& set() const { return set_; }
  SemigroupTime time() const { return t_; }
  const QuadratureSpec& quadrature() const { return quad_; }
  int dim() const { return set_.dim(); }

  /// Phi(C) under the inner rule.
  double mean() const { return mean_; }

  /// T_t h~(x).
  double smoothed(const Vector& x) const;

  double psi(const Vector& x) const;
  double d1(const Vector& x, int i) const;
  double d2(const Vector& x, int i, int j) const;
  double d3(const Vector& x, const MultiIndex& idx) const;

  /// D^alpha psi_t(x) for every alpha in one sweep over the s-nodes.
  std::vector<double> derivatives(const Vector& x, std::span<const MultiIndex> alphas) const;

  /// Laplacian psi_t(x) - x . grad psi_t(x).
  double generator(const Vector& x) const;

 private:
  bool constant_indicator() const { return set_.is_empty() || set_.is_whole_space(); }

  ConvexSet set_;
  SemigroupTime t_;
  QuadratureSpec quad_;
  SectionIntegrator integrator_;
  Vector s_nodes_;
  Vector s_weights_;
  double mean_ = 0.0;
};

/// T_t h~(x) - (Laplacian psi_t - x . grad psi_t)(x).
double stein_residual(const SteinSolution& sol, const Vector& x);

struct DoubleIntegralReport {
  std::vector<double> values;  ///< left side for each u
  double max_abs = 0.0;
  double scale = 0.0;  ///< k e^{2s} (1 - e^{-2s})
  double ratio = 0.0;  ///< max_abs / scale, the implied constant
};

/// Sup over a grid of shifts u of
///   | int int h~(sqrt((n-1)/n) e^{-s} x + e^{-s} u + sqrt(1 - e^{-2s}) z) phi(x) D_idx phi(z) dx dz |
/// with h = 1_C. The x-integral uses `outer` over all k axes; the z-integral
/// is a line-section integral with `inner`.
DoubleIntegralReport verify_double_integral_bound(const ConvexSet& set, int n, double s, const MultiIndex& idx,
                                                  const std::vector<Vector>& u_grid, const InnerRule& outer,
                                                  const InnerRule& inner);

}  // namespace stein
