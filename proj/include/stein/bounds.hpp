#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "stein/clt.hpp"
#include "stein/measure.hpp"

namespace stein {

/// Absolute constants of the bounds. None is known numerically; every one
/// defaults to 1 and can be overridden from a config file.
struct ConstantsConfig {
  double c0 = 1.0, c0p = 1.0, c1 = 1.0, c2 = 1.0, c3 = 1.0, c4 = 1.0, c5 = 1.0, c6 = 1.0, c7 = 1.0, c8 = 1.0,
         c9 = 1.0, c10 = 1.0, c = 1.0;

  /// Throws ConfigError unless every constant is finite and positive.
  void validate() const;
};

nlohmann::json to_json(const ConstantsConfig& consts);
/// Missing keys keep their defaults; unknown keys are a ConfigError.
ConstantsConfig constants_from_json(const nlohmann::json& j, ConstantsConfig base = {});

/// Smoothing parameters for dimension k: eps = a_k sqrt(1 - e^{-2t}) with a_k
/// the alpha-quantile of the chi law.
struct SmoothingParams {
  SemigroupTime t{1.0};
  double alpha = kSevenEighths;
  double a_k = 0.0;
  double eps = 0.0;

  static SmoothingParams make(int k, SemigroupTime t, double alpha = kSevenEighths);
};

/// c1 k^{3/2} rho3 delta_prev / (sqrt(n) sqrt(t)) + c2 k^{5/2} rho3 / sqrt(n).
double rhs_316(int k, double rho3, int n, double t, double delta_prev, const ConstantsConfig& consts);

/// (2 alpha - 1)^{-1}; throws HypothesisError unless alpha > 1/2.
double smoothing_prefactor(double alpha);
/// (2 alpha - 1)^{-1} (gamma_star + omega_star).
double smoothing_bound(double gamma_star, double omega_star, double alpha);

/// max over translates y and over f = 1_{C^eps + y}, 1_{C^{-eps} + y} of
/// |E T_t f(S_n) - Phi(f)|, estimated from M draws of S_n shared by every
/// translate. T_t f and Phi(f) come from the same inner rule.
Estimate gamma_star_hat(const SumLaw& law, const SmoothingParams& params, const ConvexSet& set,
                        const std::vector<Vector>& translates, std::size_t M, const InnerRule& rule,
                        std::uint64_t seed, int threads = 0);

/// P(e^{-t} Z in (boundary C)^{2 eps}).
MeasureEstimate omega_star_hat(const ConvexSet& set, double eps, SemigroupTime t);

/// omega* / (sqrt(k) 2 eps e^t), the implied constant of the shell bound.
double omega_star_ratio(const ConvexSet& set, double eps, SemigroupTime t);

inline constexpr double kMinimumTime = 1e-4;

/// min(1, sqrt(k) delta_prev rho3 / sqrt(n)); t_min when delta_prev = 0.
double optimal_t(int k, double rho3, int n, double delta_prev, double t_min = kMinimumTime);

/// c6 k^{3/2} rho3 delta_prev / (sqrt(n) sqrt(t)) + c7 k^{5/2} rho3 / sqrt(n) + c8 k sqrt(t) e^t.
double rhs_411(int k, double rho3, int n, double t, double delta_prev, const ConstantsConfig& consts);
/// c9 k^{5/4} rho3^{1/2} delta_prev^{1/2} / n^{1/4} + c7 k^{3/2} rho3 / sqrt(n).
double rhs_412(int k, double rho3, int n, double delta_prev, const ConstantsConfig& consts);
/// c k^{5/2} rho3 / sqrt(n).
double theorem_bound(int k, double rho3, int n, const ConstantsConfig& consts);
/// c k^{5/2} beta3; throws HypothesisError unless beta3 < 1.
double noniid_bound(int k, double beta3, const ConstantsConfig& consts);
/// c k gamma3.
double gamma_bound(int k, double gamma3, const ConstantsConfig& consts);

/// Positive root of c = a sqrt(c) + b, i.e. ((a + sqrt(a^2 + 4b)) / 2)^2.
double induction_constant(double c10, double c7);

struct RecursionCertificate {
  double c_star = 0.0;    ///< max(1, root of c = c10 sqrt(c) + c7)
  double c9_used = 0.0;   ///< c10 - 1
  std::vector<double> sequence;  ///< iterated upper bounds delta_1 .. delta_{n_max}
  /// First n from which the c*-envelope maps into itself up to n_max; 0 if never.
  int n_star = 0;
  bool envelope_holds = false;  ///< the envelope maps into itself for every 2 <= n <= n_max
  double worst_margin = 0.0;    ///< min over n of envelope_n - step_n (relative to envelope_n)
  int worst_n = 0;
};

/// Runs the induction numerically. The step uses c9 = c10 - 1, the relation
/// tying the two constants in the induction chain; sequence starts at
/// delta_1 = 1 and each term is min(1, rhs_412(previous)).
RecursionCertificate recursion_certify(int k, double rho3, int n_max, const ConstantsConfig& consts);

/// Same envelope check with an explicit c9 (e.g. the configured one).
RecursionCertificate recursion_certify(int k, double rho3, int n_max, const ConstantsConfig& consts, double c9);

struct BoundReport {
  int k = 1;
  int n = 1;
  std::string source;
  double rho3 = 0.0;
  double beta3 = 0.0;
  double gamma3 = 0.0;
  double t = 0.0;
  double delta_prev = 0.0;
  double rhs_316 = 0.0;
  double rhs_411 = 0.0;
  double optimal_t = 0.0;
  double rhs_412 = 0.0;
  double theorem_bound = 0.0;
  std::optional<double> noniid_bound;  ///< absent when beta3 >= 1
  double gamma_bound = 0.0;
  std::optional<DeltaEstimate> delta;
  bool within_theorem = true;  ///< delta_hat <= theorem_bound (monitored)
};

/// All right-hand sides at (k, n) for the iid sum of `src`, which is also
/// the non-iid sum X_j = Y_j / sqrt(n). delta_prev is the previous-step
/// discrepancy fed to the recursive bounds; t <= 0 selects optimal_t.
BoundReport evaluate_bounds(const SourceDistribution& src, int n, double delta_prev, double t,
                            const ConstantsConfig& consts);

struct ScanCell {
  std::string source;
  int k = 1;
  int n = 1;
  DeltaEstimate delta;
};

struct ExponentFit {
  bool defined = false;
  double slope = 0.0;
  double std_error = 0.0;
  double ci_half_width = 0.0;  ///< 1.96 standard errors
  std::string note;
};

/// Weighted least squares of log delta against log x, with weights from the
/// delta-method variance (se / delta)^2. Undefined when fewer than two cells
/// are distinguishable from zero (delta <= 3 max_set_error).
ExponentFit fit_log_slope(const std::vector<double>& x, const std::vector<DeltaEstimate>& deltas);

struct ScanReport {
  std::vector<ScanCell> cells;
  /// Exponent in k at each n of n_list, per source, in row order source x n.
  std::vector<std::pair<std::string, int>> k_fit_keys;
  std::vector<ExponentFit> k_fits;
  /// Exponent in n at each k of k_list, per source, in row order source x k.
  std::vector<std::pair<std::string, int>> n_fit_keys;
  std::vector<ExponentFit> n_fits;
};

/// delta_hat over every (source, k, n) cell. Cell draws use a stream derived
/// from (seed, source, k, n); the family for each k comes from `family_for`.
ScanReport dim_scan(const std::vector<SourceKind>& sources, const std::vector<int>& k_list,
                    const std::vector<int>& n_list, const std::function<SetFamily(int)>& family_for, std::size_t M,
                    std::uint64_t seed, int threads = 0);

/// Seed for one (source, k, n) cell.
std::uint64_t cell_seed(std::uint64_t seed, SourceKind source, int k, int n);

}  // namespace stein
