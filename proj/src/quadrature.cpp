#include "stein/quadrature.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <map>
#include <mutex>

namespace stein {

namespace {

// Golub-Welsch: nodes are the eigenvalues of the symmetric Jacobi matrix,
// weights are mu0 times the squared first eigenvector components.
QuadratureRule golub_welsch(const Vector& off_diagonal, int n, double mu0) {
  Matrix jacobi = Matrix::Zero(n, n);
  for (int i = 0; i + 1 < n; ++i) {
    jacobi(i, i + 1) = off_diagonal(i);
    jacobi(i + 1, i) = off_diagonal(i);
  }
  Eigen::SelfAdjointEigenSolver<Matrix> solver(jacobi);
  QuadratureRule rule;
  rule.nodes = solver.eigenvalues();
  rule.weights = mu0 * solver.eigenvectors().row(0).transpose().array().square();
  return rule;
}

}  // namespace

QuadratureRule gauss_hermite(int n) {
  if (n < 1) throw ConfigError("gauss_hermite: need at least one node");
  static std::mutex cache_mutex;
  static std::map<int, QuadratureRule> cache;
  std::lock_guard lock(cache_mutex);
  if (auto it = cache.find(n); it != cache.end()) return it->second;
  Vector off(std::max(n - 1, 0));
  for (int i = 0; i + 1 < n; ++i) off(i) = std::sqrt(static_cast<double>(i + 1));
  QuadratureRule rule = golub_welsch(off, n, 1.0);
  // Symmetrize; the eigen solver leaves ~1e-15 asymmetry in the nodes.
  for (int i = 0; i < n / 2; ++i) {
    const double z = 0.5 * (rule.nodes(n - 1 - i) - rule.nodes(i));
    const double w = 0.5 * (rule.weights(n - 1 - i) + rule.weights(i));
    rule.nodes(i) = -z;
    rule.nodes(n - 1 - i) = z;
    rule.weights(i) = rule.weights(n - 1 - i) = w;
  }
  if (n % 2 == 1) rule.nodes(n / 2) = 0.0;
  rule.weights /= rule.weights.sum();
  cache.emplace(n, rule);
  return rule;
}

QuadratureRule gauss_legendre(int n, double a, double b) {
  if (n < 1) throw ConfigError("gauss_legendre: need at least one node");
  Vector off(std::max(n - 1, 0));
  for (int i = 0; i + 1 < n; ++i) {
    const double j = i + 1.0;
    off(i) = j / std::sqrt(4.0 * j * j - 1.0);
  }
  QuadratureRule rule = golub_welsch(off, n, 2.0);
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);
  rule.nodes = (mid + half * rule.nodes.array()).matrix();
  rule.weights *= half;
  return rule;
}

namespace {

double simpson_step(const std::function<double(double)>& f, double a, double b, double fa, double fm, double fb,
                    double whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
  return simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace

double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double tol, int max_depth) {
  if (a == b) return 0.0;
  const double fa = f(a);
  const double fb = f(b);
  const double m = 0.5 * (a + b);
  const double fm = f(m);
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return simpson_step(f, a, b, fa, fm, fb, whole, tol, max_depth);
}

}  // namespace stein
