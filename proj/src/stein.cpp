#include "stein/stein.hpp"

#include <array>
#include <cmath>
#include <numbers>

#include "stein/quadrature.hpp"

namespace stein {

void QuadratureSpec::validate() const {
  if (!(s_truncation_offset >= 10.0)) throw ConfigError("quadrature: s truncation must reach at least t + 10");
  if (s_nodes < 16) throw ConfigError("quadrature: at least 16 s-nodes are required");
}

QuadratureSpec default_quadrature(int k) {
  QuadratureSpec q;
  q.inner = default_inner_rule(k);
  return q;
}

double kernel_weight(double s) {
  if (!(s > 0.0)) throw DomainError("kernel_weight: s must be positive");
  return std::exp(-s) / std::sqrt(-std::expm1(-2.0 * s));
}

double kernel_weight_tail(int m, double t, double tol) {
  if (m < 1) throw DomainError("kernel_weight_tail: m must be positive");
  if (t < 0.0 || (m > 1 && t == 0.0)) throw DomainError("kernel_weight_tail: t must be positive");
  const double upper = std::asin(std::exp(-t));
  return adaptive_simpson([m](double theta) { return std::pow(std::tan(theta), m - 1); }, 0.0, upper, tol);
}

SteinSolution::SteinSolution(ConvexSet set, SemigroupTime t, QuadratureSpec quad)
    : set_(std::move(set)), t_(t), quad_(quad), integrator_(set_.dim(), quad.inner) {
  quad_.validate();
  if (t.value() < 0.01) throw DomainError("SteinSolution: t must be at least 0.01");
  const double t0 = t.value();
  const double t1 = t0 + quad_.s_truncation_offset;
  s_nodes_.resize(quad_.s_nodes);
  s_weights_.resize(quad_.s_nodes);
  if (quad_.transform == STransform::ExpSubstitution) {
    // ds = du / u on u in [e^{-t1}, e^{-t0}].
    const QuadratureRule gl = gauss_legendre(quad_.s_nodes, std::exp(-t1), std::exp(-t0));
    for (int j = 0; j < quad_.s_nodes; ++j) {
      s_nodes_(j) = -std::log(gl.nodes(j));
      s_weights_(j) = gl.weights(j) / gl.nodes(j);
    }
  } else {
    // Panels graded quadratically towards s = t where the integrand varies fastest.
    const int per_panel = 16;
    const int panels = std::max(1, quad_.s_nodes / per_panel);
    s_nodes_.resize(panels * per_panel);
    s_weights_.resize(panels * per_panel);
    for (int p = 0; p < panels; ++p) {
      const double a = t0 + (t1 - t0) * std::pow(static_cast<double>(p) / panels, 2);
      const double b = t0 + (t1 - t0) * std::pow(static_cast<double>(p + 1) / panels, 2);
      const QuadratureRule gl = gauss_legendre(per_panel, a, b);
      s_nodes_.segment(p * per_panel, per_panel) = gl.nodes;
      s_weights_.segment(p * per_panel, per_panel) = gl.weights;
    }
  }
  mean_ = constant_indicator() ? (set_.is_empty() ? 0.0 : 1.0)
                               : integrator_.indicator_mass(set_, Vector::Zero(set_.dim()), 1.0);
}

double SteinSolution::smoothed(const Vector& x) const {
  if (x.size() != dim()) throw DomainError("SteinSolution: dimension mismatch");
  if (constant_indicator()) return 0.0;
  return integrator_.indicator_mass(set_, t_.decay() * x, t_.spread()) - mean_;
}

std::vector<double> SteinSolution::derivatives(const Vector& x, std::span<const MultiIndex> alphas) const {
  if (x.size() != dim()) throw DomainError("SteinSolution: dimension mismatch");
  if (!x.allFinite()) throw DomainError("SteinSolution: non-finite point");
  for (const auto& a : alphas) a.validate(dim());
  std::vector<double> out(alphas.size(), 0.0);
  if (constant_indicator()) return out;
  std::vector<double> moments(alphas.size());
  Vector mu(x.size());
  for (Eigen::Index j = 0; j < s_nodes_.size(); ++j) {
    const double s = s_nodes_(j);
    const double u = std::exp(-s);
    const double sigma = std::sqrt(-std::expm1(-2.0 * s));
    const double w = u / sigma;
    mu.noalias() = u * x;
    integrator_.indicator_moments(set_, mu, sigma, alphas, moments);
    for (std::size_t a = 0; a < alphas.size(); ++a) {
      const int m = alphas[a].order();
      const double centred = m == 0 ? moments[a] - mean_ : moments[a];
      out[a] -= s_weights_(j) * std::pow(w, m) * centred;
    }
  }
  return out;
}

double SteinSolution::psi(const Vector& x) const {
  const std::array<MultiIndex, 1> a{MultiIndex{}};
  return derivatives(x, a)[0];
}

double SteinSolution::d1(const Vector& x, int i) const {
  const std::array<MultiIndex, 1> a{MultiIndex{i}};
  return derivatives(x, a)[0];
}

double SteinSolution::d2(const Vector& x, int i, int j) const {
  const std::array<MultiIndex, 1> a{MultiIndex{i, j}};
  return derivatives(x, a)[0];
}

double SteinSolution::d3(const Vector& x, const MultiIndex& idx) const {
  if (idx.order() != 3) throw DomainError("d3: index must have three entries");
  const std::array<MultiIndex, 1> a{idx};
  return derivatives(x, a)[0];
}

double SteinSolution::generator(const Vector& x) const {
  const int k = dim();
  std::vector<MultiIndex> alphas;
  alphas.reserve(static_cast<std::size_t>(2 * k));
  for (int i = 0; i < k; ++i) alphas.push_back(MultiIndex{i});
  for (int i = 0; i < k; ++i) alphas.push_back(MultiIndex{i, i});
  const auto d = derivatives(x, alphas);
  double value = 0.0;
  for (int i = 0; i < k; ++i) value += d[static_cast<std::size_t>(k + i)] - x(i) * d[static_cast<std::size_t>(i)];
  return value;
}

double stein_residual(const SteinSolution& sol, const Vector& x) { return sol.smoothed(x) - sol.generator(x); }

DoubleIntegralReport verify_double_integral_bound(const ConvexSet& set, int n, double s, const MultiIndex& idx,
                                                  const std::vector<Vector>& u_grid, const InnerRule& outer,
                                                  const InnerRule& inner) {
  if (n < 2) throw DomainError("verify_double_integral_bound: n must be at least 2");
  if (!(s > 0.0)) throw DomainError("verify_double_integral_bound: s must be positive");
  if (u_grid.empty()) throw DomainError("verify_double_integral_bound: empty shift grid");
  const int k = set.dim();
  idx.validate(k);
  const double decay = std::exp(-s);
  const double sigma = std::sqrt(-std::expm1(-2.0 * s));
  const double shrink = std::sqrt((n - 1.0) / n) * decay;
  const double sign = (idx.order() % 2 == 0) ? 1.0 : -1.0;

  DoubleIntegralReport report;
  report.scale = k * std::exp(2.0 * s) * (-std::expm1(-2.0 * s));
  const bool constant = set.is_empty() || set.is_whole_space();
  const SectionIntegrator z_rule(k, inner);
  const PointRule x_rule = make_point_rule(k, outer);
  const std::array<MultiIndex, 1> alpha{idx};
  Vector mu(k);
  for (const Vector& u : u_grid) {
    if (u.size() != k) throw DomainError("verify_double_integral_bound: shift dimension mismatch");
    double total = 0.0;
    if (!constant) {
      for (Eigen::Index p = 0; p < x_rule.weights.size(); ++p) {
        mu.noalias() = shrink * x_rule.points.col(p) + decay * u;
        double moment = 0.0;
        z_rule.indicator_moments(set, mu, sigma, alpha, std::span<double>(&moment, 1));
        // D^alpha phi = (-1)^m He_alpha phi; the centring constant drops out
        // because D^alpha phi integrates to zero.
        total += x_rule.weights(p) * sign * moment;
      }
    }
    report.values.push_back(total);
    report.max_abs = std::max(report.max_abs, std::abs(total));
  }
  report.ratio = report.max_abs / report.scale;
  return report;
}

}  // namespace stein
