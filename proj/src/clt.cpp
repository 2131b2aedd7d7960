#include "stein/clt.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>

#include "stein/measure.hpp"
#include "stein/parallel.hpp"

namespace stein {

namespace {

constexpr double kSqrt3 = 1.7320508075688772935274463415058723;

double draw_coordinate(SourceKind kind, RngStream& rng) {
  switch (kind) {
    case SourceKind::Gaussian:
      return rng.normal();
    case SourceKind::Rademacher:
      return (rng.bits() >> 63) ? 1.0 : -1.0;
    case SourceKind::Uniform:
      return kSqrt3 * (2.0 * rng.uniform() - 1.0);
    case SourceKind::Exponential:
      return -std::log1p(-rng.uniform()) - 1.0;
  }
  return 0.0;
}

// Sum of n independent +-1 signs: 2 * popcount(n fair bits) - n.
double rademacher_sum(int n, RngStream& rng) {
  int ones = 0;
  int left = n;
  while (left >= 64) {
    ones += std::popcount(rng.bits());
    left -= 64;
  }
  if (left > 0) ones += std::popcount(rng.bits() >> (64 - left));
  return 2.0 * ones - n;
}

// Mean and standard error of per-sample values accumulated in one pass.
struct Running {
  double sum = 0.0;
  double sum_sq = 0.0;
  std::size_t count = 0;
  void add(double v) {
    sum += v;
    sum_sq += v * v;
    ++count;
  }
  double mean() const { return sum / static_cast<double>(count); }
  double std_error() const {
    if (count < 2) return 0.0;
    const double m = mean();
    const double var = std::max(0.0, (sum_sq - count * m * m) / static_cast<double>(count - 1));
    return std::sqrt(var / static_cast<double>(count));
  }
};

void require_samples(std::size_t M) {
  if (M < 1) throw ConfigError("at least one Monte Carlo sample is required");
}

}  // namespace

std::string to_string(SourceKind kind) {
  switch (kind) {
    case SourceKind::Gaussian:
      return "gaussian";
    case SourceKind::Rademacher:
      return "rademacher";
    case SourceKind::Uniform:
      return "uniform";
    case SourceKind::Exponential:
      return "exponential";
  }
  return "unknown";
}

SourceKind source_kind_from_string(const std::string& name) {
  if (name == "gaussian") return SourceKind::Gaussian;
  if (name == "rademacher") return SourceKind::Rademacher;
  if (name == "uniform") return SourceKind::Uniform;
  if (name == "exponential") return SourceKind::Exponential;
  throw ConfigError("unknown source '" + name + "' (expected gaussian, rademacher, uniform or exponential)");
}

double coordinate_abs_moment(SourceKind kind, int p) {
  if (p == 2) return 1.0;
  if (p != 1 && p != 3) throw DomainError("coordinate_abs_moment: p must be 1, 2 or 3");
  const double root_two_over_pi = std::sqrt(2.0 / std::numbers::pi);
  switch (kind) {
    case SourceKind::Gaussian:
      return p == 1 ? root_two_over_pi : 2.0 * root_two_over_pi;
    case SourceKind::Rademacher:
      return 1.0;
    case SourceKind::Uniform:
      return p == 1 ? kSqrt3 / 2.0 : 3.0 * kSqrt3 / 4.0;
    case SourceKind::Exponential:
      return p == 1 ? 2.0 / std::numbers::e : 12.0 / std::numbers::e - 2.0;
  }
  return 0.0;
}

SourceDistribution::SourceDistribution(SourceKind kind, int k) : kind_(kind), k_(k) {
  if (k < 1) throw ConfigError("source: k must be positive");
}

void SourceDistribution::sample(RngStream& rng, Eigen::Ref<Vector> out) const {
  if (out.size() != k_) throw DomainError("source: output dimension mismatch");
  for (int i = 0; i < k_; ++i) out(i) = draw_coordinate(kind_, rng);
}

Vector SourceDistribution::sample(RngStream& rng) const {
  Vector y(k_);
  sample(rng, y);
  return y;
}

MomentSummary SourceDistribution::moment_summary(std::size_t mc_samples, std::uint64_t seed) const {
  MomentSummary out;
  const double k = k_;
  if (kind_ == SourceKind::Rademacher) {
    out.rho3 = std::pow(k, 1.5);
    return out;
  }
  if (kind_ == SourceKind::Gaussian) {
    // E||Z||^3 = 2^{3/2} Gamma((k + 3) / 2) / Gamma(k / 2)
    out.rho3 = std::exp(1.5 * std::log(2.0) + std::lgamma(0.5 * (k + 3.0)) - std::lgamma(0.5 * k));
    return out;
  }
  if (k_ == 1) {
    out.rho3 = coordinate_abs_moment(kind_, 3);
    return out;
  }
  require_samples(mc_samples);
  RngStream rng(seed, 0x7603ULL);
  Running acc;
  Vector y(k_);
  for (std::size_t s = 0; s < mc_samples; ++s) {
    sample(rng, y);
    acc.add(std::pow(y.squaredNorm(), 1.5));
  }
  out.rho3 = acc.mean();
  out.estimation_error = acc.std_error();
  out.method = MomentMethod::MonteCarlo;
  return out;
}

NonIIDSource::NonIIDSource(SourceKind kind, int k, std::vector<Vector> variances, std::string label)
    : kind_(kind), k_(k), variances_(std::move(variances)), label_(std::move(label)) {}

NonIIDSource NonIIDSource::scaled_iid(SourceKind kind, int k, int n) {
  if (k < 1 || n < 1) throw ConfigError("non-iid source: k and n must be positive");
  std::vector<Vector> v(static_cast<std::size_t>(n), Vector::Constant(k, 1.0 / n));
  return NonIIDSource(kind, k, std::move(v), "scaled-iid-" + to_string(kind));
}

NonIIDSource NonIIDSource::geometric(SourceKind kind, int k, int n, double ratio) {
  if (k < 1 || n < 1) throw ConfigError("non-iid source: k and n must be positive");
  if (!(ratio > 0.0) || !std::isfinite(ratio)) throw ConfigError("non-iid source: ratio must be positive");
  std::vector<double> w(static_cast<std::size_t>(n));
  double total = 0.0;
  for (int j = 0; j < n; ++j) total += (w[static_cast<std::size_t>(j)] = std::pow(ratio, j));
  std::vector<Vector> v;
  v.reserve(w.size());
  for (double wj : w) v.push_back(Vector::Constant(k, wj / total));
  return NonIIDSource(kind, k, std::move(v), "geometric-" + to_string(kind));
}

NonIIDSource NonIIDSource::random_diagonal(SourceKind kind, int k, int n, std::uint64_t seed) {
  if (k < 1 || n < 1) throw ConfigError("non-iid source: k and n must be positive");
  RngStream rng(seed, 0xd1a9ULL);
  std::vector<Vector> v(static_cast<std::size_t>(n), Vector(k));
  for (int i = 0; i < k; ++i) {
    double total = 0.0;
    for (auto& vj : v) total += (vj(i) = 0.5 + rng.uniform());
    for (auto& vj : v) vj(i) /= total;
  }
  return NonIIDSource(kind, k, std::move(v), "random-diagonal-" + to_string(kind));
}

std::vector<Matrix> NonIIDSource::covariances() const {
  std::vector<Matrix> out;
  out.reserve(variances_.size());
  for (int j = 0; j < size(); ++j) out.push_back(covariance(j));
  return out;
}

double abs_sum_third_moment(SourceKind kind, const Vector& c) {
  // (sum c)^3 = p3 + 3 (p1 p2 - p3) + (p1^3 - 3 p1 p2 + 2 p3) over distinct
  // index patterns; each pattern takes the matching product of moments.
  const double m1 = coordinate_abs_moment(kind, 1);
  const double m3 = coordinate_abs_moment(kind, 3);
  const double p1 = c.sum();
  const double p2 = c.squaredNorm();
  const double p3 = c.array().cube().sum();
  return m3 * p3 + 3.0 * m1 * (p1 * p2 - p3) + m1 * m1 * m1 * (p1 * p1 * p1 - 3.0 * p1 * p2 + 2.0 * p3);
}

MomentSummary NonIIDSource::moment_summary(std::size_t mc_samples, std::uint64_t seed) const {
  MomentSummary out;
  for (const Vector& v : variances_) out.gamma3 += abs_sum_third_moment(kind_, v.cwiseSqrt());

  const bool isotropic = std::all_of(variances_.begin(), variances_.end(), [](const Vector& v) {
    return (v.array() == v(0)).all();
  });
  const SourceDistribution base(kind_, k_);
  if (kind_ == SourceKind::Rademacher) {
    for (const Vector& v : variances_) out.beta3 += std::pow(v.sum(), 1.5);
    return out;
  }
  if (isotropic && (k_ == 1 || kind_ == SourceKind::Gaussian)) {
    const double rho3 = base.moment_summary().rho3;
    for (const Vector& v : variances_) out.beta3 += std::pow(v(0), 1.5) * rho3;
    return out;
  }
  require_samples(mc_samples);
  RngStream rng(seed, 0xbe7a3ULL);
  Running acc;
  Vector y(k_);
  for (std::size_t s = 0; s < mc_samples; ++s) {
    base.sample(rng, y);
    const Eigen::ArrayXd y2 = y.array().square();
    double total = 0.0;
    for (const Vector& v : variances_) total += std::pow((v.array() * y2).sum(), 1.5);
    acc.add(total);
  }
  out.beta3 = acc.mean();
  out.estimation_error = acc.std_error();
  out.method = MomentMethod::MonteCarlo;
  return out;
}

Vector NonIIDSource::sample_sum(RngStream& rng) const {
  Vector s = Vector::Zero(k_);
  for (const Vector& v : variances_)
    for (int i = 0; i < k_; ++i) s(i) += std::sqrt(v(i)) * draw_coordinate(kind_, rng);
  return s;
}

Matrix normalizer_matrix(const Matrix& covariance) {
  if (covariance.rows() != covariance.cols()) throw DomainError("normalizer_matrix: covariance must be square");
  const Matrix rest = Matrix::Identity(covariance.rows(), covariance.cols()) - covariance;
  const Eigen::SelfAdjointEigenSolver<Matrix> eig(0.5 * (rest + rest.transpose()));
  if (eig.info() != Eigen::Success || !(eig.eigenvalues().minCoeff() > 0.0))
    throw DegeneracyError("normalizer_matrix: I - Cov X_j is not positive definite");
  return eig.eigenvectors() * eig.eigenvalues().cwiseSqrt().cwiseInverse().asDiagonal() *
         eig.eigenvectors().transpose();
}

Matrix normalizer_matrix(const NonIIDSource& src, int j) {
  if (j < 0 || j >= src.size()) throw DomainError("normalizer_matrix: index out of range");
  return normalizer_matrix(src.covariance(j));
}

SumLaw::SumLaw(std::optional<SourceDistribution> iid, std::optional<NonIIDSource> noniid, int n)
    : iid_(std::move(iid)), noniid_(std::move(noniid)), n_(n) {}

SumLaw SumLaw::iid(SourceDistribution src, int n) {
  if (n < 1) throw ConfigError("n must be at least 1");
  return SumLaw(std::move(src), std::nullopt, n);
}

SumLaw SumLaw::noniid(NonIIDSource src) {
  const int n = src.size();
  return SumLaw(std::nullopt, std::move(src), n);
}

int SumLaw::dim() const { return iid_ ? iid_->dim() : noniid_->dim(); }

std::string SumLaw::label() const { return iid_ ? iid_->name() : noniid_->label(); }

void SumLaw::draw(RngStream& rng, Eigen::Ref<Vector> out) const {
  if (noniid_) {
    out = noniid_->sample_sum(rng);
    return;
  }
  const int k = iid_->dim();
  const double scale = 1.0 / std::sqrt(static_cast<double>(n_));
  if (iid_->kind() == SourceKind::Rademacher) {
    for (int i = 0; i < k; ++i) out(i) = scale * rademacher_sum(n_, rng);
    return;
  }
  out.setZero();
  for (int j = 0; j < n_; ++j)
    for (int i = 0; i < k; ++i) out(i) += draw_coordinate(iid_->kind(), rng);
  out *= scale;
}

Vector sample_sum(const SourceDistribution& src, int n, RngStream& rng) {
  Vector s(src.dim());
  SumLaw::iid(src, n).draw(rng, s);
  return s;
}

Vector sample_sum(const NonIIDSource& src, RngStream& rng) { return src.sample_sum(rng); }

Matrix sample_sums(const SumLaw& law, std::size_t M, std::uint64_t seed, int threads, std::uint64_t stream) {
  require_samples(M);
  Matrix out(law.dim(), static_cast<Eigen::Index>(M));
  const std::size_t blocks = (M + kSampleBlock - 1) / kSampleBlock;
  parallel_blocks(blocks, threads, [&](std::size_t b) {
    RngStream rng(seed, stream, b);
    const std::size_t end = std::min(M, (b + 1) * kSampleBlock);
    for (std::size_t s = b * kSampleBlock; s < end; ++s) law.draw(rng, out.col(static_cast<Eigen::Index>(s)));
  });
  return out;
}

std::size_t count_inside(const ConvexSet& set, const Matrix& points) {
  if (points.rows() != set.dim()) throw DomainError("count_inside: dimension mismatch");
  const auto& v = set.variant();
  if (const auto* h = std::get_if<HalfSpace>(&v)) {
    if (std::isinf(h->offset)) return static_cast<std::size_t>(points.cols());
    return static_cast<std::size_t>(((h->normal.transpose() * points).array() <= h->offset).count());
  }
  if (const auto* b = std::get_if<Ball>(&v)) {
    return static_cast<std::size_t>(
        ((points.colwise() - b->center).colwise().squaredNorm().array() <= b->radius * b->radius).count());
  }
  if (const auto* b = std::get_if<Box>(&v)) {
    const Eigen::ArrayXXd below = points.array().colwise() - b->lower.array();
    const Eigen::ArrayXXd above = points.array().colwise() - b->upper.array();
    return static_cast<std::size_t>(((below >= 0.0).colwise().all() && (above <= 0.0).colwise().all()).count());
  }
  std::size_t count = 0;
  for (Eigen::Index c = 0; c < points.cols(); ++c) count += contains(set, points.col(c)) ? 1 : 0;
  return count;
}

DeltaEstimate delta_hat(const Matrix& samples, const SetFamily& family, std::uint64_t seed, int threads) {
  family.validate();
  if (samples.rows() != family.dim()) throw DomainError("delta_hat: sample dimension differs from the family");
  const auto M = static_cast<std::size_t>(samples.cols());
  require_samples(M);
  const std::size_t n_sets = family.sets.size();
  std::vector<double> diff(n_sets), se(n_sets);
  parallel_blocks(n_sets, threads, [&](std::size_t s) {
    const ConvexSet& set = family.sets[s];
    const MeasureEstimate phi = gaussian_measure(set);
    const double p = static_cast<double>(count_inside(set, samples)) / static_cast<double>(M);
    diff[s] = p - phi.value;
    se[s] = std::hypot(std::sqrt(p * (1.0 - p) / static_cast<double>(M)), phi.std_error);
  });
  DeltaEstimate out;
  out.n_samples = M;
  out.seed = seed;
  for (std::size_t s = 0; s < n_sets; ++s) {
    if (std::abs(diff[s]) > out.value) {
      out.value = std::abs(diff[s]);
      out.argmax = s;
    }
    out.max_set_error = std::max(out.max_set_error, se[s]);
  }
  out.value = std::clamp(out.value, 0.0, 1.0);
  out.std_error = se[out.argmax];
  out.differences = std::move(diff);
  return out;
}

DeltaEstimate delta_hat(const SumLaw& law, const SetFamily& family, std::size_t M, std::uint64_t seed, int threads) {
  if (M < 1000) throw ConfigError("delta_hat: M must be at least 1000");
  return delta_hat(sample_sums(law, M, seed, threads), family, seed, threads);
}

namespace {

// Per-sample values f(x) over M draws, reduced in block order.
template <class Fn>
Estimate sample_average(const SumLaw& law, std::size_t M, std::uint64_t seed, int threads, Fn&& f) {
  const Matrix samples = sample_sums(law, M, seed, threads, 2);
  Vector values(static_cast<Eigen::Index>(M));
  const std::size_t blocks = (M + kSampleBlock - 1) / kSampleBlock;
  parallel_blocks(blocks, threads, [&](std::size_t b) {
    const std::size_t end = std::min(M, (b + 1) * kSampleBlock);
    for (std::size_t s = b * kSampleBlock; s < end; ++s) {
      const auto i = static_cast<Eigen::Index>(s);
      values(i) = f(Vector(samples.col(i)));
    }
  });
  Running acc;
  for (Eigen::Index i = 0; i < values.size(); ++i) acc.add(values(i));
  return {acc.mean(), acc.std_error(), M, seed};
}

}  // namespace

Estimate smoothed_discrepancy_hat(const SumLaw& law, SemigroupTime t, const ConvexSet& set, std::size_t M,
                                  const InnerRule& rule, std::uint64_t seed, int threads) {
  require_samples(M);
  if (set.dim() != law.dim()) throw DomainError("smoothed_discrepancy_hat: dimension mismatch");
  if (set.is_empty() || set.is_whole_space()) return {0.0, 0.0, M, seed};
  const SectionIntegrator quad(set.dim(), rule);
  const double mean = quad.indicator_mass(set, Vector::Zero(set.dim()), 1.0);
  if (t.value() == 0.0)
    return sample_average(law, M, seed, threads, [&](const Vector& x) { return (contains(set, x) ? 1.0 : 0.0) - mean; });
  return sample_average(law, M, seed, threads, [&](const Vector& x) {
    return quad.indicator_mass(set, t.decay() * x, t.spread()) - mean;
  });
}

SteinDiscrepancy stein_discrepancy_hat(const SumLaw& law, SemigroupTime t, const ConvexSet& set, std::size_t M,
                                       const QuadratureSpec& quad, std::uint64_t seed, int threads) {
  require_samples(M);
  if (set.dim() != law.dim()) throw DomainError("stein_discrepancy_hat: dimension mismatch");
  SteinDiscrepancy out;
  out.direct = out.stein = {0.0, 0.0, M, seed};
  if (set.is_empty() || set.is_whole_space()) return out;
  const SteinSolution sol(set, t, quad);
  const Matrix samples = sample_sums(law, M, seed, threads, 2);
  Eigen::MatrixX2d values(static_cast<Eigen::Index>(M), 2);
  const std::size_t blocks = (M + kSampleBlock - 1) / kSampleBlock;
  parallel_blocks(blocks, threads, [&](std::size_t b) {
    const std::size_t end = std::min(M, (b + 1) * kSampleBlock);
    for (std::size_t s = b * kSampleBlock; s < end; ++s) {
      const auto i = static_cast<Eigen::Index>(s);
      const Vector x = samples.col(i);
      values(i, 0) = sol.smoothed(x);
      values(i, 1) = sol.generator(x);
    }
  });
  Running direct, stein_form;
  for (Eigen::Index i = 0; i < values.rows(); ++i) {
    direct.add(values(i, 0));
    stein_form.add(values(i, 1));
  }
  out.direct = {direct.mean(), direct.std_error(), M, seed};
  out.stein = {stein_form.mean(), stein_form.std_error(), M, seed};
  out.difference = out.direct.value - out.stein.value;
  out.combined_error = std::hypot(out.direct.std_error, out.stein.std_error);
  return out;
}

}  // namespace stein
