#include "stein/measure.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "stein/integrator.hpp"

namespace stein {

namespace {

constexpr std::array<int, 64> kPrimes{2,   3,   5,   7,   11,  13,  17,  19,  23,  29,  31,  37,  41,  43,  47,  53,
                                      59,  61,  67,  71,  73,  79,  83,  89,  97,  101, 103, 107, 109, 113, 127, 131,
                                      137, 139, 149, 151, 157, 163, 167, 173, 179, 181, 191, 193, 197, 199, 211, 223,
                                      227, 229, 233, 239, 241, 251, 257, 263, 269, 271, 277, 281, 283, 293, 307, 311};

double radical_inverse(std::uint64_t i, int base) {
  double f = 1.0;
  double r = 0.0;
  while (i > 0) {
    f /= base;
    r += f * static_cast<double>(i % static_cast<std::uint64_t>(base));
    i /= static_cast<std::uint64_t>(base);
  }
  return r;
}

std::optional<double> closed_form(const ConvexSet& set) {
  const auto& v = set.variant();
  if (set.is_empty()) return 0.0;
  if (const auto* h = std::get_if<HalfSpace>(&v)) return std::isinf(h->offset) ? 1.0 : normal_cdf(h->offset);
  if (const auto* b = std::get_if<Ball>(&v)) {
    if (b->center.squaredNorm() == 0.0) return chi_cdf(b->radius, set.dim());
  }
  if (const auto* b = std::get_if<Box>(&v)) {
    double p = 1.0;
    for (Eigen::Index j = 0; j < b->lower.size(); ++j) p *= normal_interval(b->lower(j), b->upper(j));
    return p;
  }
  if (set.dim() == 1) {
    const auto section = line_section(set, Vector::Zero(1), 0);
    return section ? normal_interval(section->lo, section->hi) : 0.0;
  }
  return std::nullopt;
}

}  // namespace

Vector halton_point(std::uint64_t index, int dims) {
  if (dims < 0 || dims > static_cast<int>(kPrimes.size())) throw ConfigError("halton_point: unsupported dimension");
  Vector u(dims);
  for (int d = 0; d < dims; ++d) u(d) = radical_inverse(index, kPrimes[static_cast<std::size_t>(d)]);
  return u;
}

MeasureEstimate gaussian_measure(const ConvexSet& set, const MeasureOptions& options) {
  if (auto exact = closed_form(set)) return {*exact, 0.0, true};
  if (options.replicates < 2) throw ConfigError("gaussian_measure: need at least two QMC replicates");
  const int k = set.dim();
  const int dims = k - 1;
  const int axis = preferred_axis(set);
  const std::size_t per_replicate = std::max<std::size_t>(1, options.qmc_points / static_cast<std::size_t>(options.replicates));

  RngStream shifts(options.seed, 0x51e7ULL);
  Vector origin(k);
  Vector means(options.replicates);
  for (int r = 0; r < options.replicates; ++r) {
    Vector shift(dims);
    for (int d = 0; d < dims; ++d) shift(d) = shifts.uniform();
    double sum = 0.0;
    for (std::size_t i = 0; i < per_replicate; ++i) {
      Vector u = halton_point(i + 1, dims) + shift;
      for (int d = 0; d < dims; ++d) {
        u(d) -= std::floor(u(d));
        u(d) = std::clamp(u(d), 1e-16, 1.0 - 1e-16);
      }
      for (int j = 0, d = 0; j < k; ++j) origin(j) = (j == axis) ? 0.0 : normal_quantile(u(d++));
      if (const auto section = line_section(set, origin, axis)) sum += normal_interval(section->lo, section->hi);
    }
    means(r) = sum / static_cast<double>(per_replicate);
  }
  const double mean = means.mean();
  const double var = (means.array() - mean).square().sum() / (options.replicates - 1);
  return {mean, std::sqrt(var / options.replicates), false};
}

MeasureEstimate shell_measure(const ConvexSet& set, double eps, double scale, const MeasureOptions& options) {
  if (!(eps >= 0.0)) throw DomainError("shell_measure: eps must be nonnegative");
  if (!(scale > 0.0)) throw DomainError("shell_measure: scale must be positive");
  if (eps == 0.0) return {0.0, 0.0, true};
  const ConvexSet outer = stein::scale(dilate(set, 2.0 * eps), 1.0 / scale);
  const ConvexSet inner = stein::scale(erode(set, 2.0 * eps), 1.0 / scale);
  const MeasureEstimate a = gaussian_measure(outer, options);
  const MeasureEstimate b = gaussian_measure(inner, options);
  return {std::clamp(a.value - b.value, 0.0, 1.0), std::hypot(a.std_error, b.std_error), a.exact && b.exact};
}

}  // namespace stein
