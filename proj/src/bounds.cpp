#include "stein/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "stein/parallel.hpp"

namespace stein {

namespace {

void require_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) throw DomainError(std::string(what) + " must be finite and positive");
}

void require_delta(double delta) {
  if (!(delta >= 0.0 && delta <= 1.0)) throw DomainError("delta_prev must lie in [0, 1]");
}

void require_n(int n, int least) {
  if (n < least) throw DomainError("n must be at least " + std::to_string(least));
}

#define STEIN_CONSTANTS(X) \
  X(c0) X(c0p) X(c1) X(c2) X(c3) X(c4) X(c5) X(c6) X(c7) X(c8) X(c9) X(c10) X(c)

}  // namespace

void ConstantsConfig::validate() const {
#define STEIN_CHECK(name) \
  if (!(name > 0.0) || !std::isfinite(name)) throw ConfigError("constant " #name " must be finite and positive");
  STEIN_CONSTANTS(STEIN_CHECK)
#undef STEIN_CHECK
}

nlohmann::json to_json(const ConstantsConfig& consts) {
  nlohmann::json j;
#define STEIN_WRITE(name) j[#name] = consts.name;
  STEIN_CONSTANTS(STEIN_WRITE)
#undef STEIN_WRITE
  return j;
}

ConstantsConfig constants_from_json(const nlohmann::json& j, ConstantsConfig base) {
  if (!j.is_object()) throw ConfigError("constants must be an object");
  for (const auto& [key, value] : j.items()) {
    if (!value.is_number()) throw ConfigError("constant '" + key + "' must be a number");
    bool known = false;
#define STEIN_READ(name)           \
  if (key == #name) {              \
    base.name = value.get<double>(); \
    known = true;                  \
  }
    STEIN_CONSTANTS(STEIN_READ)
#undef STEIN_READ
    if (!known) throw ConfigError("unknown constant '" + key + "'");
  }
  base.validate();
  return base;
}

#undef STEIN_CONSTANTS

SmoothingParams SmoothingParams::make(int k, SemigroupTime t, double alpha) {
  if (!(alpha > 0.5)) throw HypothesisError("smoothing requires alpha > 1/2");
  if (!(t.value() > 0.0)) throw DomainError("smoothing requires t > 0");
  SmoothingParams p;
  p.t = t;
  p.alpha = alpha;
  p.a_k = quantile_a(k, alpha).a_k;
  p.eps = p.a_k * t.spread();
  return p;
}

double rhs_316(int k, double rho3, int n, double t, double delta_prev, const ConstantsConfig& consts) {
  require_n(n, 2);
  require_positive(t, "t");
  require_positive(rho3, "rho3");
  require_delta(delta_prev);
  const double kk = k;
  const double root_n = std::sqrt(static_cast<double>(n));
  return consts.c1 * std::pow(kk, 1.5) * rho3 * delta_prev / (root_n * std::sqrt(t)) +
         consts.c2 * std::pow(kk, 2.5) * rho3 / root_n;
}

double smoothing_prefactor(double alpha) {
  if (!(alpha > 0.5)) throw HypothesisError("smoothing inequality requires alpha > 1/2");
  return 1.0 / (2.0 * alpha - 1.0);
}

double smoothing_bound(double gamma_star, double omega_star, double alpha) {
  return smoothing_prefactor(alpha) * (gamma_star + omega_star);
}

Estimate gamma_star_hat(const SumLaw& law, const SmoothingParams& params, const ConvexSet& set,
                        const std::vector<Vector>& translates, std::size_t M, const InnerRule& rule,
                        std::uint64_t seed, int threads) {
  if (set.dim() != law.dim()) throw DomainError("gamma_star_hat: dimension mismatch");
  if (translates.empty()) throw DomainError("gamma_star_hat: empty translate grid");
  const int k = set.dim();
  std::vector<ConvexSet> bodies;
  for (const Vector& y : translates) {
    const ConvexSet shifted = translate(set, y);
    if (params.eps == 0.0) {
      bodies.push_back(shifted);
    } else {
      bodies.push_back(dilate(shifted, params.eps));
      bodies.push_back(erode(shifted, params.eps));
    }
  }
  const Matrix samples = sample_sums(law, M, seed, threads, 2);
  const SectionIntegrator quad(k, rule);
  const SemigroupTime t = params.t;
  std::vector<double> means(bodies.size(), 0.0), errors(bodies.size(), 0.0);
  for (std::size_t b = 0; b < bodies.size(); ++b) {
    const ConvexSet& body = bodies[b];
    if (body.is_empty() || body.is_whole_space()) continue;
    const double phi = quad.indicator_mass(body, Vector::Zero(k), 1.0);
    Vector values(static_cast<Eigen::Index>(M));
    const std::size_t blocks = (M + kSampleBlock - 1) / kSampleBlock;
    parallel_blocks(blocks, threads, [&](std::size_t blk) {
      const std::size_t end = std::min(M, (blk + 1) * kSampleBlock);
      for (std::size_t s = blk * kSampleBlock; s < end; ++s) {
        const auto i = static_cast<Eigen::Index>(s);
        values(i) = quad.indicator_mass(body, t.decay() * samples.col(i), t.spread()) - phi;
      }
    });
    means[b] = values.mean();
    const double var = M > 1 ? (values.array() - means[b]).square().sum() / static_cast<double>(M - 1) : 0.0;
    errors[b] = std::sqrt(var / static_cast<double>(M));
  }
  Estimate out{0.0, 0.0, M, seed};
  for (std::size_t b = 0; b < bodies.size(); ++b) {
    if (std::abs(means[b]) > out.value) {
      out.value = std::abs(means[b]);
      out.std_error = errors[b];
    }
  }
  return out;
}

MeasureEstimate omega_star_hat(const ConvexSet& set, double eps, SemigroupTime t) {
  return shell_measure(set, eps, t.decay());
}

double omega_star_ratio(const ConvexSet& set, double eps, SemigroupTime t) {
  require_positive(eps, "eps");
  const double scale = std::sqrt(static_cast<double>(set.dim())) * 2.0 * eps * std::exp(t.value());
  return omega_star_hat(set, eps, t).value / scale;
}

double optimal_t(int k, double rho3, int n, double delta_prev, double t_min) {
  require_n(n, 1);
  require_positive(rho3, "rho3");
  require_delta(delta_prev);
  require_positive(t_min, "t_min");
  if (delta_prev == 0.0) return t_min;
  return std::min(1.0, std::sqrt(static_cast<double>(k)) * delta_prev * rho3 / std::sqrt(static_cast<double>(n)));
}

double rhs_411(int k, double rho3, int n, double t, double delta_prev, const ConstantsConfig& consts) {
  require_n(n, 2);
  require_positive(t, "t");
  require_positive(rho3, "rho3");
  require_delta(delta_prev);
  const double kk = k;
  const double root_n = std::sqrt(static_cast<double>(n));
  return consts.c6 * std::pow(kk, 1.5) * rho3 * delta_prev / (root_n * std::sqrt(t)) +
         consts.c7 * std::pow(kk, 2.5) * rho3 / root_n + consts.c8 * kk * std::sqrt(t) * std::exp(t);
}

double rhs_412(int k, double rho3, int n, double delta_prev, const ConstantsConfig& consts) {
  require_n(n, 2);
  require_positive(rho3, "rho3");
  if (!(delta_prev >= 0.0) || !std::isfinite(delta_prev)) throw DomainError("delta_prev must be nonnegative");
  const double kk = k;
  const double nn = n;
  return consts.c9 * std::pow(kk, 1.25) * std::sqrt(rho3 * delta_prev) / std::pow(nn, 0.25) +
         consts.c7 * std::pow(kk, 1.5) * rho3 / std::sqrt(nn);
}

double theorem_bound(int k, double rho3, int n, const ConstantsConfig& consts) {
  require_n(n, 1);
  require_positive(rho3, "rho3");
  return consts.c * std::pow(static_cast<double>(k), 2.5) * rho3 / std::sqrt(static_cast<double>(n));
}

double noniid_bound(int k, double beta3, const ConstantsConfig& consts) {
  require_positive(beta3, "beta3");
  if (!(beta3 < 1.0)) throw HypothesisError("non-iid bound requires beta3 < 1");
  return consts.c * std::pow(static_cast<double>(k), 2.5) * beta3;
}

double gamma_bound(int k, double gamma3, const ConstantsConfig& consts) {
  require_positive(gamma3, "gamma3");
  return consts.c * k * gamma3;
}

double induction_constant(double c10, double c7) {
  require_positive(c10, "c10");
  require_positive(c7, "c7");
  const double root = 0.5 * (c10 + std::sqrt(c10 * c10 + 4.0 * c7));
  return root * root;
}

RecursionCertificate recursion_certify(int k, double rho3, int n_max, const ConstantsConfig& consts, double c9) {
  consts.validate();
  if (k < 1) throw DomainError("k must be positive");
  require_positive(rho3, "rho3");
  require_n(n_max, 2);
  if (!(c9 >= 0.0)) throw DomainError("c9 must be nonnegative");
  ConstantsConfig step = consts;
  step.c9 = c9;

  RecursionCertificate out;
  out.c9_used = c9;
  out.c_star = std::max(1.0, induction_constant(consts.c10, consts.c7));
  out.sequence.reserve(static_cast<std::size_t>(n_max));
  out.sequence.push_back(1.0);
  const double scale = std::pow(static_cast<double>(k), 2.5) * rho3;
  out.worst_margin = std::numeric_limits<double>::infinity();
  int last_failure = 0;
  for (int n = 2; n <= n_max; ++n) {
    out.sequence.push_back(std::min(1.0, rhs_412(k, rho3, n, out.sequence.back(), step)));
    const double envelope = out.c_star * scale / std::sqrt(static_cast<double>(n));
    const double previous = out.c_star * scale / std::sqrt(n - 1.0);
    const double margin = (envelope - rhs_412(k, rho3, n, previous, step)) / envelope;
    if (margin < out.worst_margin) {
      out.worst_margin = margin;
      out.worst_n = n;
    }
    if (margin < 0.0) last_failure = n;
  }
  out.envelope_holds = last_failure == 0;
  out.n_star = last_failure == n_max ? 0 : std::max(2, last_failure + 1);
  return out;
}

RecursionCertificate recursion_certify(int k, double rho3, int n_max, const ConstantsConfig& consts) {
  if (consts.c10 < 1.0) throw DomainError("c10 must be at least 1 so that c9 = c10 - 1 is nonnegative");
  return recursion_certify(k, rho3, n_max, consts, consts.c10 - 1.0);
}

BoundReport evaluate_bounds(const SourceDistribution& src, int n, double delta_prev, double t,
                            const ConstantsConfig& consts) {
  consts.validate();
  require_n(n, 2);
  const int k = src.dim();
  const double rho3 = src.moment_summary().rho3;
  BoundReport r;
  r.k = k;
  r.n = n;
  r.source = src.name();
  r.rho3 = rho3;
  r.delta_prev = delta_prev;
  r.optimal_t = optimal_t(k, rho3, n, delta_prev);
  r.t = t > 0.0 ? t : r.optimal_t;
  r.rhs_316 = rhs_316(k, rho3, n, r.t, delta_prev, consts);
  r.rhs_411 = rhs_411(k, rho3, n, r.t, delta_prev, consts);
  r.rhs_412 = rhs_412(k, rho3, n, delta_prev, consts);
  r.theorem_bound = theorem_bound(k, rho3, n, consts);
  // The iid sum as a non-iid sum: X_j = Y_j / sqrt(n).
  r.beta3 = rho3 / std::sqrt(static_cast<double>(n));
  if (r.beta3 < 1.0) r.noniid_bound = noniid_bound(k, r.beta3, consts);
  r.gamma3 = abs_sum_third_moment(src.kind(), Vector::Ones(k)) / std::sqrt(static_cast<double>(n));
  r.gamma_bound = gamma_bound(k, r.gamma3, consts);
  return r;
}

ExponentFit fit_log_slope(const std::vector<double>& x, const std::vector<DeltaEstimate>& deltas) {
  if (x.size() != deltas.size()) throw DomainError("fit_log_slope: size mismatch");
  ExponentFit fit;
  std::vector<double> lx, ly, w;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const DeltaEstimate& d = deltas[i];
    if (!(d.value > 3.0 * d.max_set_error) || !(d.std_error > 0.0)) continue;
    lx.push_back(std::log(x[i]));
    ly.push_back(std::log(d.value));
    const double rel = d.std_error / d.value;
    w.push_back(1.0 / (rel * rel));
  }
  if (lx.size() < 2) {
    fit.note = "undefined: fewer than two cells are distinguishable from zero";
    return fit;
  }
  double sw = 0.0, sx = 0.0, sy = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sw += w[i];
    sx += w[i] * lx[i];
    sy += w[i] * ly[i];
  }
  const double mx = sx / sw;
  const double my = sy / sw;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sxx += w[i] * (lx[i] - mx) * (lx[i] - mx);
    sxy += w[i] * (lx[i] - mx) * (ly[i] - my);
  }
  if (!(sxx > 0.0)) {
    fit.note = "undefined: abscissae coincide";
    return fit;
  }
  fit.defined = true;
  fit.slope = sxy / sxx;
  fit.std_error = std::sqrt(1.0 / sxx);
  fit.ci_half_width = 1.96 * fit.std_error;
  if (lx.size() < x.size()) fit.note = "cells indistinguishable from zero were dropped";
  return fit;
}

std::uint64_t cell_seed(std::uint64_t seed, SourceKind source, int k, int n) {
  std::uint64_t h = mix64(seed ^ 0x5ca9ULL);
  h = mix64(h ^ static_cast<std::uint64_t>(source));
  h = mix64(h ^ static_cast<std::uint64_t>(k));
  return mix64(h ^ static_cast<std::uint64_t>(n));
}

ScanReport dim_scan(const std::vector<SourceKind>& sources, const std::vector<int>& k_list,
                    const std::vector<int>& n_list, const std::function<SetFamily(int)>& family_for, std::size_t M,
                    std::uint64_t seed, int threads) {
  if (sources.empty() || k_list.empty() || n_list.empty()) throw ConfigError("dim_scan: empty grid");
  if (!std::is_sorted(k_list.begin(), k_list.end())) throw ConfigError("dim_scan: k_list must be ascending");
  ScanReport report;
  std::vector<SetFamily> families;
  for (int k : k_list) families.push_back(family_for(k));
  for (SourceKind src : sources) {
    for (std::size_t ki = 0; ki < k_list.size(); ++ki) {
      const int k = k_list[ki];
      for (int n : n_list) {
        const std::uint64_t s = cell_seed(seed, src, k, n);
        report.cells.push_back({to_string(src), k, n,
                                delta_hat(SumLaw::iid(SourceDistribution(src, k), n), families[ki], M, s, threads)});
      }
    }
  }
  const auto cell = [&](std::size_t si, std::size_t ki, std::size_t ni) -> const ScanCell& {
    return report.cells[(si * k_list.size() + ki) * n_list.size() + ni];
  };
  for (std::size_t si = 0; si < sources.size(); ++si) {
    for (std::size_t ni = 0; ni < n_list.size(); ++ni) {
      std::vector<double> x;
      std::vector<DeltaEstimate> d;
      for (std::size_t ki = 0; ki < k_list.size(); ++ki) {
        x.push_back(k_list[ki]);
        d.push_back(cell(si, ki, ni).delta);
      }
      report.k_fit_keys.emplace_back(to_string(sources[si]), n_list[ni]);
      report.k_fits.push_back(fit_log_slope(x, d));
    }
    for (std::size_t ki = 0; ki < k_list.size(); ++ki) {
      std::vector<double> x;
      std::vector<DeltaEstimate> d;
      for (std::size_t ni = 0; ni < n_list.size(); ++ni) {
        x.push_back(n_list[ni]);
        d.push_back(cell(si, ki, ni).delta);
      }
      report.n_fit_keys.emplace_back(to_string(sources[si]), k_list[ki]);
      report.n_fits.push_back(fit_log_slope(x, d));
    }
  }
  return report;
}

}  // namespace stein
