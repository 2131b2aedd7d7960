#include "stein/gaussian.hpp"

#include <algorithm>
#include <limits>
#include <string>
#include <vector>

namespace stein {

MultiIndex::MultiIndex(std::initializer_list<int> axes) {
  if (axes.size() > 3) throw DomainError("MultiIndex: at most three axes");
  for (int a : axes) axes_[static_cast<std::size_t>(order_++)] = a;
}

int MultiIndex::multiplicity(int axis) const {
  int m = 0;
  for (int slot = 0; slot < order_; ++slot) m += (axes_[static_cast<std::size_t>(slot)] == axis);
  return m;
}

void MultiIndex::validate(int k) const {
  for (int slot = 0; slot < order_; ++slot) {
    const int a = axes_[static_cast<std::size_t>(slot)];
    if (a < 0 || a >= k) {
      throw DomainError("MultiIndex: axis " + std::to_string(a) + " outside [0, " + std::to_string(k) + ")");
    }
  }
}

bool operator==(const MultiIndex& a, const MultiIndex& b) {
  if (a.order_ != b.order_) return false;
  auto sa = a.axes_;
  auto sb = b.axes_;
  std::sort(sa.begin(), sa.begin() + a.order_);
  std::sort(sb.begin(), sb.begin() + b.order_);
  return sa == sb;
}

// Acklam's rational approximation followed by one Halley step on erfc.
double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    if (p == 0.0) return -std::numeric_limits<double>::infinity();
    if (p == 1.0) return std::numeric_limits<double>::infinity();
    throw DomainError("normal_quantile: p outside [0, 1]");
  }
  static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02, -2.759285104469687e+02,
                                 1.383577518672690e+02,  -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02, -1.556989798598866e+02,
                                 6.680131188771972e+01,  -1.328068155288572e+01};
  static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01, -2.400758277161838e+00,
                                 -2.549732539343734e+00, 4.374664141464968e+00,  2.938163982698783e+00};
  static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01, 2.445134137142996e+00,
                                 3.754408661907416e+00};
  constexpr double p_low = 0.02425;
  double x;
  if (p < p_low) {
    const double q = std::sqrt(-2.0 * std::log(p));
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  } else if (p <= 1.0 - p_low) {
    const double q = p - 0.5;
    const double r = q * q;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  } else {
    const double q = std::sqrt(-2.0 * std::log1p(-p));
    x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  const double e = (p < 0.5) ? normal_cdf(x) - p : (1.0 - p) - normal_sf(x);
  const double u = e * std::sqrt(2.0 * std::numbers::pi) * std::exp(0.5 * x * x);
  return x - u / (1.0 + 0.5 * x * u);
}

IndexPattern pattern_of(const MultiIndex& idx) {
  if (idx.order() != 3) throw DomainError("pattern_of: index must have three entries");
  const int m = std::max({idx.multiplicity(idx[0]), idx.multiplicity(idx[1]), idx.multiplicity(idx[2])});
  if (m == 3) return IndexPattern::Triple;
  if (m == 2) return IndexPattern::Pair;
  return IndexPattern::AllDistinct;
}

double abs_hermite_integral(int m) {
  if (m < 0 || m > 3) throw DomainError("abs_hermite_integral: order must be in [0, 3]");
  if (m == 0) return 1.0;
  // Nonnegative real roots of He_m; the integrand is even, so integrate [0, inf) twice.
  std::vector<double> cuts{0.0};
  if (m == 2) cuts.push_back(1.0);
  if (m == 3) cuts.push_back(std::sqrt(3.0));
  cuts.push_back(std::numeric_limits<double>::infinity());
  const auto antiderivative = [m](double z) { return std::isinf(z) ? 0.0 : -hermite_he(m - 1, z) * normal_pdf(z); };
  double half = 0.0;
  for (std::size_t j = 0; j + 1 < cuts.size(); ++j) half += std::abs(antiderivative(cuts[j + 1]) - antiderivative(cuts[j]));
  return 2.0 * half;
}

double abs_d3_integral(IndexPattern pattern, int k) {
  switch (pattern) {
    case IndexPattern::AllDistinct:
      if (k < 3) throw DomainError("abs_d3_integral: all-distinct pattern needs k >= 3");
      return std::pow(abs_hermite_integral(1), 3);
    case IndexPattern::Pair:
      if (k < 2) throw DomainError("abs_d3_integral: pair pattern needs k >= 2");
      return abs_hermite_integral(2) * abs_hermite_integral(1);
    case IndexPattern::Triple:
      if (k < 1) throw DomainError("abs_d3_integral: k must be positive");
      return abs_hermite_integral(3);
  }
  throw DomainError("abs_d3_integral: unknown pattern");
}

double abs_d3_integral(const MultiIndex& idx, int k) {
  idx.validate(k);
  return abs_d3_integral(pattern_of(idx), k);
}

namespace {

constexpr double kGammaEps = 1e-16;
constexpr int kGammaMaxIter = 10000;

double gamma_p_series(double a, double x) {
  double term = 1.0 / a;
  double sum = term;
  for (int n = 1; n < kGammaMaxIter; ++n) {
    term *= x / (a + n);
    sum += term;
    if (std::abs(term) < std::abs(sum) * kGammaEps) break;
  }
  return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Modified Lentz evaluation of the continued fraction for Q(a, x).
double gamma_q_fraction(double a, double x) {
  constexpr double tiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < kGammaMaxIter; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < kGammaEps) break;
  }
  return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

}  // namespace

double regularized_gamma_p(double a, double x) {
  if (!(a > 0.0)) throw DomainError("regularized_gamma_p: a must be positive");
  if (x < 0.0) throw DomainError("regularized_gamma_p: x must be nonnegative");
  if (x == 0.0) return 0.0;
  if (std::isinf(x)) return 1.0;
  return x < a + 1.0 ? gamma_p_series(a, x) : 1.0 - gamma_q_fraction(a, x);
}

double regularized_gamma_q(double a, double x) {
  if (!(a > 0.0)) throw DomainError("regularized_gamma_q: a must be positive");
  if (x < 0.0) throw DomainError("regularized_gamma_q: x must be nonnegative");
  if (x == 0.0) return 1.0;
  if (std::isinf(x)) return 0.0;
  return x < a + 1.0 ? 1.0 - gamma_p_series(a, x) : gamma_q_fraction(a, x);
}

double chi_cdf(double r, int k) {
  if (k < 1) throw DomainError("chi_cdf: k must be positive");
  if (r <= 0.0) return 0.0;
  return regularized_gamma_p(0.5 * k, 0.5 * r * r);
}

double chi_sf(double r, int k) {
  if (k < 1) throw DomainError("chi_sf: k must be positive");
  if (r <= 0.0) return 1.0;
  return regularized_gamma_q(0.5 * k, 0.5 * r * r);
}

double chi_pdf(double r, int k) {
  if (k < 1) throw DomainError("chi_pdf: k must be positive");
  if (r < 0.0) return 0.0;
  if (r == 0.0) return k == 1 ? 2.0 * kInvSqrt2Pi : 0.0;
  const double half_k = 0.5 * k;
  return std::exp((k - 1.0) * std::log(r) - 0.5 * r * r - (half_k - 1.0) * std::log(2.0) - std::lgamma(half_k));
}

QuantileResult quantile_a(int k, double mass) {
  if (k < 1) throw DomainError("quantile_a: k must be positive");
  if (!(mass > 0.0 && mass < 1.0)) throw DomainError("quantile_a: mass must lie in (0, 1)");
  double lo = 0.0;
  double hi = std::sqrt(static_cast<double>(k)) + 1.0;
  int doublings = 0;
  while (chi_cdf(hi, k) < mass) {
    lo = hi;
    hi *= 2.0;
    if (++doublings > 60) throw std::runtime_error("quantile_a: failed to bracket the quantile");
  }
  for (int it = 0; it < 200 && hi - lo > 1e-13; ++it) {
    const double mid = 0.5 * (lo + hi);
    (chi_cdf(mid, k) < mass ? lo : hi) = mid;
  }
  const double a = 0.5 * (lo + hi);
  return {k, a, chi_cdf(a, k)};
}

Matrix sample_std_normal(std::size_t n_samples, int k, RngStream& stream) {
  if (k < 1) throw DomainError("sample_std_normal: k must be positive");
  Matrix out(k, static_cast<Eigen::Index>(n_samples));
  for (Eigen::Index j = 0; j < out.cols(); ++j)
    for (Eigen::Index i = 0; i < k; ++i) out(i, j) = stream.normal();
  return out;
}

}  // namespace stein
