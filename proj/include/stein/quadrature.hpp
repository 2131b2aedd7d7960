#pragma once

#include <functional>

#include "stein/gaussian.hpp"

namespace stein {

struct QuadratureRule {
  Vector nodes;
  Vector weights;
};

/// n-point Gauss-Hermite rule for the standard normal weight:
/// sum_j w_j f(z_j) ~ integral f(z) phi(z) dz, weights summing to one.
/// Exact for polynomials of degree <= 2n - 1.
QuadratureRule gauss_hermite(int n);

/// n-point Gauss-Legendre rule on [a, b].
QuadratureRule gauss_legendre(int n, double a = -1.0, double b = 1.0);

/// Adaptive Simpson with Richardson correction on [a, b] to absolute
/// tolerance `tol`. The integrand must be finite on the closed interval.
double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double tol = 1e-12,
                        int max_depth = 50);

}  // namespace stein
