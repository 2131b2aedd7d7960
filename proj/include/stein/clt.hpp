#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "stein/family.hpp"
#include "stein/gaussian.hpp"
#include "stein/integrator.hpp"
#include "stein/rng.hpp"
#include "stein/semigroup.hpp"
#include "stein/stein.hpp"

namespace stein {

/// Law of each coordinate of Y; coordinates are iid with mean 0, variance 1.
enum class SourceKind {
  Gaussian,     ///< N(0, 1)
  Rademacher,   ///< +-1 with probability 1/2
  Uniform,      ///< uniform on [-sqrt 3, sqrt 3]
  Exponential,  ///< E - 1 with E ~ Exp(1)
};

std::string to_string(SourceKind kind);
/// "gaussian", "rademacher", "uniform" or "exponential"; ConfigError otherwise.
SourceKind source_kind_from_string(const std::string& name);

/// E|Y^(i)|^p for p in {1, 2, 3}.
double coordinate_abs_moment(SourceKind kind, int p);

enum class MomentMethod { Exact, MonteCarlo };

struct MomentSummary {
  double rho3 = 0.0;  ///< E||Y||^3 (iid sources)
  double beta3 = 0.0;   ///< sum_j E||X_j||^3 (non-iid sources)
  double gamma3 = 0.0;  ///< sum_j E(sum_i |X_j^(i)|)^3 (non-iid sources)
  double estimation_error = 0.0;
  MomentMethod method = MomentMethod::Exact;
};

/// Product source in R^k: Y has iid coordinates of the given kind, so
/// E Y = 0 and Cov Y = I_k by construction.
class SourceDistribution {
 public:
  SourceDistribution(SourceKind kind, int k);

  SourceKind kind() const { return kind_; }
  int dim() const { return k_; }
  std::string name() const { return to_string(kind_); }
  bool covariance_certificate() const { return true; }

  /// Writes one draw of Y into out (size k).
  void sample(RngStream& rng, Eigen::Ref<Vector> out) const;
  Vector sample(RngStream& rng) const;

  /// rho3 exactly for Gaussian and Rademacher sources and for k = 1;
  /// otherwise a Monte Carlo estimate with its standard error.
  MomentSummary moment_summary(std::size_t mc_samples = std::size_t{1} << 20, std::uint64_t seed = 0x3a3) const;

 private:
  SourceKind kind_;
  int k_;
};

/// Independent X_j = A_j Y_j with diagonal A_j and iid product Y_j, scaled
/// so that sum_j Cov X_j = I_k.
class NonIIDSource {
 public:
  /// A_j = n^{-1/2} I: the iid normalized sum.
  static NonIIDSource scaled_iid(SourceKind kind, int k, int n);
  /// Cov X_j proportional to ratio^j I.
  static NonIIDSource geometric(SourceKind kind, int k, int n, double ratio);
  /// Per coordinate, variances across j are independent uniforms normalized
  /// to sum to one.
  static NonIIDSource random_diagonal(SourceKind kind, int k, int n, std::uint64_t seed);

  SourceKind kind() const { return kind_; }
  int dim() const { return k_; }
  int size() const { return static_cast<int>(variances_.size()); }
  const std::string& label() const { return label_; }
  /// Diagonal of Cov X_j.
  const Vector& variances(int j) const { return variances_.at(static_cast<std::size_t>(j)); }
  Matrix covariance(int j) const { return variances(j).asDiagonal(); }
  std::vector<Matrix> covariances() const;

  /// gamma3 is always exact; beta3 is exact for isotropic components or
  /// Rademacher coordinates and Monte Carlo otherwise.
  MomentSummary moment_summary(std::size_t mc_samples = std::size_t{1} << 18, std::uint64_t seed = 0xb3) const;

  /// One draw of S_n = sum_j X_j.
  Vector sample_sum(RngStream& rng) const;

 private:
  NonIIDSource(SourceKind kind, int k, std::vector<Vector> variances, std::string label);

  SourceKind kind_;
  int k_;
  std::vector<Vector> variances_;
  std::string label_;
};

/// E(sum_i c_i U_i)^3 for independent U_i distributed as |Y^(i)|.
double abs_sum_third_moment(SourceKind kind, const Vector& c);

/// N_j = (I - Cov)^{-1/2} by symmetric eigendecomposition. Throws
/// DegeneracyError unless I - Cov is positive definite.
Matrix normalizer_matrix(const Matrix& covariance);
Matrix normalizer_matrix(const NonIIDSource& src, int j);

/// The law of a normalized sum, either (Y_1 + ... + Y_n) / sqrt(n) or a
/// non-iid sum.
class SumLaw {
 public:
  static SumLaw iid(SourceDistribution src, int n);
  static SumLaw noniid(NonIIDSource src);

  int dim() const;
  int n() const { return n_; }
  std::string label() const;

  /// One draw of S_n.
  void draw(RngStream& rng, Eigen::Ref<Vector> out) const;

 private:
  SumLaw(std::optional<SourceDistribution> iid, std::optional<NonIIDSource> noniid, int n);

  std::optional<SourceDistribution> iid_;
  std::optional<NonIIDSource> noniid_;
  int n_;
};

/// One draw of S_n = (Y_1 + ... + Y_n) / sqrt(n).
Vector sample_sum(const SourceDistribution& src, int n, RngStream& rng);
Vector sample_sum(const NonIIDSource& src, RngStream& rng);

/// Samples drawn per RNG block. Results depend on the block layout, never on
/// the number of worker threads.
inline constexpr std::size_t kSampleBlock = 4096;

/// M draws of S_n as the columns of a k x M matrix; block b uses stream
/// (seed, stream, b).
Matrix sample_sums(const SumLaw& law, std::size_t M, std::uint64_t seed, int threads = 0, std::uint64_t stream = 1);

/// Number of columns of `points` lying in `set`.
std::size_t count_inside(const ConvexSet& set, const Matrix& points);

struct Estimate {
  double value = 0.0;
  double std_error = 0.0;
  std::size_t n_samples = 0;
  std::uint64_t seed = 0;
};

struct DeltaEstimate : Estimate {
  std::size_t argmax = 0;        ///< index of the set attaining the maximum
  double max_set_error = 0.0;    ///< largest per-set standard error
  std::vector<double> differences;  ///< empirical minus Gaussian mass, per set
};

/// max over the family of |P_M(S_n in C) - Phi(C)| from M shared draws.
/// std_error is the binomial error at the maximizing set (combined with any
/// error in Phi(C)); the upward bias of a maximum is not corrected.
DeltaEstimate delta_hat(const SumLaw& law, const SetFamily& family, std::size_t M, std::uint64_t seed,
                        int threads = 0);

/// Same as delta_hat over pre-drawn samples.
DeltaEstimate delta_hat(const Matrix& samples, const SetFamily& family, std::uint64_t seed, int threads = 0);

/// E T_t h~(S_n) for h = 1_C: the average of P(e^{-t} x + sqrt(1 - e^{-2t}) Z in C) - Phi(C)
/// over M draws x of S_n, with both probabilities from `rule`.
Estimate smoothed_discrepancy_hat(const SumLaw& law, SemigroupTime t, const ConvexSet& set, std::size_t M,
                                  const InnerRule& rule, std::uint64_t seed, int threads = 0);

struct SteinDiscrepancy {
  Estimate direct;  ///< average of T_t h~(S_n)
  Estimate stein;   ///< average of (Laplacian psi_t - x . grad psi_t)(S_n)
  double difference = 0.0;
  double combined_error = 0.0;  ///< hypot of the two standard errors
};

/// Both sides of E T_t h~(S_n) = E[(Laplacian psi_t - S_n . grad psi_t)(S_n)] on the same draws.
/// psi_t is discretized by `quad`; T_t h~ uses quad.inner.
SteinDiscrepancy stein_discrepancy_hat(const SumLaw& law, SemigroupTime t, const ConvexSet& set, std::size_t M,
                                       const QuadratureSpec& quad, std::uint64_t seed, int threads = 0);

}  // namespace stein
