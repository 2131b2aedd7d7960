#include "stein/integrator.hpp"

#include <array>
#include <numbers>
#include <vector>
#include <cmath>
#include <string>

#include "stein/quadrature.hpp"

namespace stein {

PointRule make_point_rule(int dims, const InnerRule& rule) {
  if (dims < 0) throw ConfigError("make_point_rule: negative dimension");
  PointRule out;
  if (dims == 0) {
    out.points = Matrix::Zero(0, 1);
    out.weights = Vector::Ones(1);
    return out;
  }
  if (rule.method == InnerMethod::GaussHermite) {
    if (rule.nodes < 1) throw ConfigError("Gauss-Hermite rule needs at least one node per axis");
    const double total = std::pow(static_cast<double>(rule.nodes), dims);
    if (total > static_cast<double>(kMaxTensorPoints)) {
      throw ConfigError("tensor Gauss-Hermite with " + std::to_string(rule.nodes) + " nodes per axis is infeasible in " +
                        std::to_string(dims) + " dimensions; use Monte Carlo");
    }
    const QuadratureRule gh = gauss_hermite(rule.nodes);
    const auto count = static_cast<Eigen::Index>(total);
    out.points.resize(dims, count);
    out.weights.resize(count);
    std::vector<int> digit(static_cast<std::size_t>(dims), 0);
    for (Eigen::Index p = 0; p < count; ++p) {
      double w = 1.0;
      for (int d = 0; d < dims; ++d) {
        out.points(d, p) = gh.nodes(digit[static_cast<std::size_t>(d)]);
        w *= gh.weights(digit[static_cast<std::size_t>(d)]);
      }
      out.weights(p) = w;
      for (int d = 0; d < dims; ++d) {
        if (++digit[static_cast<std::size_t>(d)] < rule.nodes) break;
        digit[static_cast<std::size_t>(d)] = 0;
      }
    }
    return out;
  }
  if (rule.samples < 1) throw ConfigError("Monte Carlo rule needs at least one sample");
  RngStream stream(rule.seed, static_cast<std::uint64_t>(dims));
  out.points = sample_std_normal(rule.samples, dims, stream);
  out.weights = Vector::Constant(static_cast<Eigen::Index>(rule.samples), 1.0 / static_cast<double>(rule.samples));
  return out;
}

InnerRule default_inner_rule(int k) {
  InnerRule rule;
  if (k > 3) rule.method = InnerMethod::MonteCarlo;
  return rule;
}

double truncated_hermite_moment(int m, double lo, double hi) {
  if (m == 0) return normal_interval(lo, hi);
  const auto edge = [m](double z) { return std::isinf(z) ? 0.0 : hermite_he(m - 1, z) * normal_pdf(z); };
  return edge(lo) - edge(hi);
}

SectionIntegrator::SectionIntegrator(int k, InnerRule rule)
    : k_(k), rule_(rule), remaining_(make_point_rule(k - 1, rule)) {
  if (k < 1) throw ConfigError("SectionIntegrator: k must be positive");
  // Smooth integrands use the full k-dimensional rule; past 2^16 tensor
  // points it switches to Monte Carlo.
  InnerRule full = rule;
  if (full.method == InnerMethod::GaussHermite && std::pow(static_cast<double>(full.nodes), k) > 65536.0)
    full.method = InnerMethod::MonteCarlo;
  full_ = make_point_rule(k, full);
}

void SectionIntegrator::indicator_moments(const ConvexSet& set, const Vector& mu, double sigma,
                                          std::span<const MultiIndex> alphas, std::span<double> out) const {
  if (set.dim() != k_ || mu.size() != k_) throw DomainError("SectionIntegrator: dimension mismatch");
  if (!(sigma > 0.0)) throw DomainError("SectionIntegrator: sigma must be positive");
  if (out.size() != alphas.size()) throw DomainError("SectionIntegrator: output size mismatch");
  for (const auto& a : alphas) a.validate(k_);
  std::fill(out.begin(), out.end(), 0.0);
  if (set.is_empty()) return;

  const int axis = preferred_axis(set);
  const bool nested = k_ > 1 && rule_.method == InnerMethod::GaussHermite && has_slice_ranges(set);
  const PointRule sliced = nested ? slice_rule(set, mu, sigma, axis) : PointRule{};
  const PointRule& remaining = nested ? sliced : remaining_;
  Vector origin = mu;
  std::array<double, 4> along{};
  Vector z(k_);
  for (Eigen::Index p = 0; p < remaining.weights.size(); ++p) {
    for (int j = 0, r = 0; j < k_; ++j) {
      if (j == axis) {
        z(j) = 0.0;
        continue;
      }
      z(j) = remaining.points(r++, p);
    }
    origin.noalias() = mu + sigma * z;
    const auto section = line_section(set, origin, axis);
    if (!section) continue;
    const double lo = section->lo / sigma;
    const double hi = section->hi / sigma;
    for (int m = 0; m < 4; ++m) along[static_cast<std::size_t>(m)] = truncated_hermite_moment(m, lo, hi);
    const double w = remaining.weights(p);
    for (std::size_t a = 0; a < alphas.size(); ++a) {
      const MultiIndex& alpha = alphas[a];
      double value = along[static_cast<std::size_t>(alpha.multiplicity(axis))];
      for (int slot = 0; slot < alpha.order(); ++slot) {
        const int j = alpha[slot];
        if (j == axis) continue;
        bool first = true;
        for (int prior = 0; prior < slot; ++prior) first = first && alpha[prior] != j;
        if (first) value *= hermite_he(alpha.multiplicity(j), z(j));
      }
      out[a] += w * value;
    }
  }
}

PointRule SectionIntegrator::slice_rule(const ConvexSet& set, const Vector& mu, double sigma,
                                               int axis) const {
  // The section length has square-root behaviour where a slice becomes
  // tangent, which Gauss-Hermite resolves poorly. On each remaining axis the
  // slice's projection [a, b] is mapped through z = m + h sin(theta), which
  // cancels that behaviour, and theta is integrated by panelled Gauss-Legendre.
  constexpr double kTail = 10.0;
  const int per_panel = std::max(4, rule_.nodes / 4);
  const QuadratureRule unit = gauss_legendre(per_panel, -0.5 * std::numbers::pi, 0.5 * std::numbers::pi);
  std::vector<int> order;
  for (int j = 0; j < k_; ++j)
    if (j != axis) order.push_back(j);
  const int depth = static_cast<int>(order.size());

  std::vector<double> points;
  std::vector<double> weights;
  Vector x = mu;
  std::vector<double> z(static_cast<std::size_t>(depth), 0.0);
  const std::function<void(int, double)> descend = [&](int level, double weight) {
    if (level == depth) {
      points.insert(points.end(), z.begin(), z.end());
      weights.push_back(weight);
      return;
    }
    const int j = order[static_cast<std::size_t>(level)];
    std::vector<int> free_axes(order.begin() + level, order.end());
    free_axes.push_back(axis);
    const auto range = slice_range(set, x, free_axes, j);
    if (!range) return;
    const double a = std::max((range->lo - mu(j)) / sigma, -kTail);
    const double b = std::min((range->hi - mu(j)) / sigma, kTail);
    if (!(b > a)) return;
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const int panels = std::max(2, static_cast<int>(std::ceil(half * std::numbers::pi)));
    const double width = std::numbers::pi / panels;
    for (int p = 0; p < panels; ++p) {
      const double t0 = -0.5 * std::numbers::pi + p * width;
      for (int q = 0; q < per_panel; ++q) {
        const double theta = t0 + width * (unit.nodes(q) + 0.5 * std::numbers::pi) / std::numbers::pi;
        const double jac = unit.weights(q) * width / std::numbers::pi * half * std::cos(theta);
        const double zj = mid + half * std::sin(theta);
        z[static_cast<std::size_t>(level)] = zj;
        x(j) = mu(j) + sigma * zj;
        descend(level + 1, weight * jac * normal_pdf(zj));
      }
    }
    x(j) = mu(j);
  };
  descend(0, 1.0);

  const auto count = static_cast<Eigen::Index>(weights.size());
  PointRule rule;
  rule.points = Eigen::Map<const Matrix>(points.data(), depth, count);
  rule.weights = Eigen::Map<const Vector>(weights.data(), count);
  return rule;
}

double SectionIntegrator::indicator_mass(const ConvexSet& set, const Vector& mu, double sigma) const {
  const std::array<MultiIndex, 1> alpha{MultiIndex{}};
  double mass = 0.0;
  indicator_moments(set, mu, sigma, alpha, std::span<double>(&mass, 1));
  return mass;
}

double SectionIntegrator::expectation(const std::function<double(const Vector&)>& f, const Vector& mu,
                                      double sigma) const {
  if (mu.size() != k_) throw DomainError("SectionIntegrator: dimension mismatch");
  double total = 0.0;
  Vector y(k_);
  for (Eigen::Index p = 0; p < full_.weights.size(); ++p) {
    y.noalias() = mu + sigma * full_.points.col(p);
    total += full_.weights(p) * f(y);
  }
  return total;
}

}  // namespace stein
