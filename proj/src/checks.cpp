#include "stein/checks.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "stein/quadrature.hpp"

namespace stein {

namespace {

class Suite {
 public:
  explicit Suite(std::string name) : name_(std::move(name)) {}

  // |value| <= tolerance.
  void near_zero(const std::string& check, double value, double tolerance, std::string detail = {}) {
    out_.push_back({name_, check, value, tolerance, std::abs(value) <= tolerance, false, std::move(detail)});
  }
  // value <= bound.
  void at_most(const std::string& check, double value, double bound, std::string detail = {}) {
    out_.push_back({name_, check, value, bound, value <= bound, false, std::move(detail)});
  }
  void at_least(const std::string& check, double value, double bound, std::string detail = {}) {
    out_.push_back({name_, check, value, bound, value >= bound, false, std::move(detail)});
  }
  void report(const std::string& check, double value, std::string detail = {}) {
    out_.push_back({name_, check, value, 0.0, true, true, std::move(detail)});
  }
  std::vector<CheckResult> take() { return std::move(out_); }

 private:
  std::string name_;
  std::vector<CheckResult> out_;
};

void require_small_k(int k, const char* what) {
  if (k < 1 || k > 3) throw ConfigError(std::string(what) + ": k must lie in 1..3 (tensor quadrature)");
}

std::vector<Vector> random_points(int k, int count, std::uint64_t seed, double spread) {
  RngStream rng(seed, 0x901ULL);
  std::vector<Vector> pts;
  for (int p = 0; p < count; ++p) {
    Vector x(k);
    for (int i = 0; i < k; ++i) x(i) = spread * rng.normal();
    pts.push_back(x);
  }
  return pts;
}

Vector random_unit(int k, RngStream& rng) {
  Vector u(k);
  do {
    for (int i = 0; i < k; ++i) u(i) = rng.normal();
  } while (u.norm() < 1e-6);
  return u.normalized();
}

TestFunction hermite_product(int k, std::vector<int> orders) {
  // g(x) = prod_i He_{m_i}(x_i); L g = -(sum m_i) g.
  orders.resize(static_cast<std::size_t>(k), 0);
  auto f = [orders](const Vector& x) {
    double v = 1.0;
    for (std::size_t i = 0; i < orders.size(); ++i) v *= hermite_he(orders[i], x(static_cast<Eigen::Index>(i)));
    return v;
  };
  auto grad = [orders](const Vector& x) {
    Vector g(x.size());
    for (Eigen::Index i = 0; i < x.size(); ++i) {
      double v = 1.0;
      for (Eigen::Index j = 0; j < x.size(); ++j) {
        const int m = orders[static_cast<std::size_t>(j)];
        v *= (j == i) ? (m == 0 ? 0.0 : m * hermite_he(m - 1, x(j))) : hermite_he(m, x(j));
      }
      g(i) = v;
    }
    return g;
  };
  auto lap = [orders](const Vector& x) {
    double total = 0.0;
    for (Eigen::Index i = 0; i < x.size(); ++i) {
      double v = 1.0;
      for (Eigen::Index j = 0; j < x.size(); ++j) {
        const int m = orders[static_cast<std::size_t>(j)];
        v *= (j == i) ? (m < 2 ? 0.0 : m * (m - 1) * hermite_he(m - 2, x(j))) : hermite_he(m, x(j));
      }
      total += v;
    }
    return total;
  };
  return TestFunction::smooth(f, grad, lap);
}

}  // namespace

bool all_passed(const std::vector<CheckResult>& results) {
  return std::all_of(results.begin(), results.end(), [](const CheckResult& r) { return r.passed; });
}

double half_line_psi_oracle(double b, double x, double t) {
  const double centre = normal_cdf(b);
  const auto integrand = [&](double s) {
    const double sigma = std::sqrt(-std::expm1(-2.0 * s));
    return normal_cdf((b - std::exp(-s) * x) / sigma) - centre;
  };
  return -adaptive_simpson(integrand, t, t + 45.0, 1e-13);
}

double abs_hermite_integral_numeric(int m) {
  if (m < 0 || m > 3) throw DomainError("abs_hermite_integral_numeric: m must lie in 0..3");
  std::vector<double> cuts{-14.0};
  if (m == 1) cuts.push_back(0.0);
  if (m == 2) cuts.insert(cuts.end(), {-1.0, 1.0});
  if (m == 3) cuts.insert(cuts.end(), {-std::sqrt(3.0), 0.0, std::sqrt(3.0)});
  cuts.push_back(14.0);
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
    total += adaptive_simpson([m](double z) { return std::abs(hermite_he(m, z)) * normal_pdf(z); }, cuts[i],
                              cuts[i + 1], 1e-15);
  return total;
}

std::vector<CheckResult> semigroup_checks(int k, std::uint64_t seed) {
  require_small_k(k, "check-semigroup");
  Suite suite("semigroup");
  const SectionIntegrator quad(k, default_inner_rule(k));
  InnerRule coarse_rule = default_inner_rule(k);
  coarse_rule.nodes = 16;
  const SectionIntegrator coarse(k, coarse_rule);
  const auto points = random_points(k, 20, seed, 1.0);
  RngStream rng(seed, 0x5e1ULL);

  // Transition density: normalization and stationary limit.
  double worst_norm = 0.0;
  for (double t : {0.1, 0.5, 1.0}) {
    for (const Vector& x : points) {
      const SemigroupTime st(t);
      // Wider proposal than the density itself keeps the ratio smooth and non-trivial.
      const Vector m = st.decay() * x;
      const double spread = 1.5 * st.spread();
      const double mass = quad.expectation(
          [&](const Vector& y) {
            const Vector z = (y - m) / spread;
            return transition_density(st, x, y) * std::pow(spread, k) / phi(z);
          },
          m, spread);
      worst_norm = std::max(worst_norm, std::abs(mass - 1.0));
    }
  }
  suite.near_zero("transition_density_normalization", worst_norm, 1e-8);
  double worst_stationary = 0.0;
  for (const Vector& x : points) {
    const Vector x3 = 3.0 * x / std::max(1.0, x.norm());
    for (const Vector& y : points)
      worst_stationary = std::max(worst_stationary,
                                  std::abs(transition_density(SemigroupTime(20.0), x3, y) / phi(y) - 1.0));
  }
  suite.near_zero("transition_density_stationary_t20", worst_stationary, 1e-7);

  // Polynomial actions and generator eigenvalues.
  double worst_poly = 0.0;
  for (double t : {0.1, 0.5, 1.0}) {
    const SemigroupTime st(t);
    for (const Vector& x : points) {
      const auto lin = TestFunction::smooth([](const Vector& y) { return y(0); });
      const auto sq = TestFunction::smooth([](const Vector& y) { return y(0) * y(0); });
      const auto one = TestFunction::smooth([](const Vector&) { return 1.0; });
      worst_poly = std::max(worst_poly, std::abs(semigroup_apply(lin, st, x, quad) - st.decay() * x(0)));
      const double e2 = std::exp(-2.0 * t);
      worst_poly = std::max(worst_poly, std::abs(semigroup_apply(sq, st, x, quad) - (e2 * x(0) * x(0) + 1.0 - e2)));
      worst_poly = std::max(worst_poly, std::abs(semigroup_apply(one, st, x, quad) - 1.0));
    }
  }
  suite.near_zero("semigroup_polynomial_moments", worst_poly, 1e-12);

  double worst_eigen = 0.0;
  double worst_eigen_fd = 0.0;
  std::vector<std::pair<std::vector<int>, int>> eigen_cases{{{1}, 1}, {{2}, 2}, {{3}, 3}, {{0}, 0}};
  if (k >= 2) eigen_cases.push_back({{1, 1}, 2});
  if (k >= 3) eigen_cases.push_back({{1, 1, 1}, 3});
  for (const auto& [orders, degree] : eigen_cases) {
    const TestFunction g = hermite_product(k, orders);
    for (const Vector& x : points) {
      const double expected = -degree * g(x);
      worst_eigen = std::max(worst_eigen, std::abs(generator_apply(g, x) - expected));
      const auto plain = [&](const Vector& y) { return g(y); };
      worst_eigen_fd = std::max(worst_eigen_fd, std::abs(generator_apply(plain, x, 1e-3) - expected));
    }
  }
  suite.near_zero("generator_eigenvalues_exact", worst_eigen, 1e-12);
  suite.near_zero("generator_eigenvalues_finite_difference", worst_eigen_fd, 1e-5);

  // Invariance: E L g(Z) = 0 for Hermite test functions, by Monte Carlo.
  {
    const std::size_t samples = std::size_t{1} << 16;
    RngStream mc(seed, 0x1a7ULL);
    const Matrix z = sample_std_normal(samples, k, mc);
    double worst_z = 0.0;
    for (const auto& [orders, degree] : eigen_cases) {
      const TestFunction g = hermite_product(k, orders);
      double sum = 0.0, sum_sq = 0.0;
      for (Eigen::Index c = 0; c < z.cols(); ++c) {
        const double v = generator_apply(g, Vector(z.col(c)));
        sum += v;
        sum_sq += v * v;
      }
      const double mean = sum / samples;
      const double var = std::max(0.0, sum_sq / samples - mean * mean);
      const double se = std::sqrt(var / samples);
      worst_z = std::max(worst_z, se > 0.0 ? std::abs(mean) / se : (mean == 0.0 ? 0.0 : 1e300));
    }
    suite.at_most("invariance_mean_generator_z_score", worst_z, 4.0);
  }

  // Catalog test functions.
  const Vector normal = random_unit(k, rng);
  const std::vector<std::pair<std::string, ConvexSet>> catalog{
      {"half-space", ConvexSet::half_space(normal, 0.3)},
      {"ball", ConvexSet::ball(Vector::Constant(k, 0.2), 1.2)},
      {"box", ConvexSet::box(Vector::Constant(k, -0.8), Vector::Constant(k, 1.1))}};

  // Semigroup law T_{t+s} = T_t T_s. The outer expectation of T_s h is a
  // full tensor rule, so for k = 3 it is coarsened to keep the cost bounded.
  {
    InnerRule outer_rule = default_inner_rule(k);
    outer_rule.nodes = k == 3 ? 8 : 32;
    InnerRule outer_coarse = outer_rule;
    outer_coarse.nodes = k == 3 ? 6 : 16;
    const SectionIntegrator outer(k, outer_rule);
    const SectionIntegrator outer_c(k, outer_coarse);
    const int n_points = k == 3 ? 3 : 20;
    double worst_excess = 0.0;
    double worst_gap = 0.0;
    const auto smooth = TestFunction::smooth([](const Vector& y) { return std::cos(y.sum()); });
    std::vector<TestFunction> hs{smooth};
    for (const auto& [name, set] : catalog) hs.push_back(TestFunction::indicator(set));
    for (const TestFunction& h : hs) {
      for (double t : {0.1, 0.5, 1.0}) {
        for (double s : {0.1, 0.5, 1.0}) {
          for (int p = 0; p < n_points; ++p) {
            const Vector& x = points[static_cast<std::size_t>(p)];
            const double direct = semigroup_apply(h, SemigroupTime(t + s), x, quad);
            const double direct_c = semigroup_apply(h, SemigroupTime(t + s), x, coarse);
            const auto inner = [&](const Vector& y) { return semigroup_apply(h, SemigroupTime(s), y, quad); };
            const double composed = outer.expectation(inner, SemigroupTime(t).decay() * x, SemigroupTime(t).spread());
            const double composed_c =
                outer_c.expectation(inner, SemigroupTime(t).decay() * x, SemigroupTime(t).spread());
            const double err = std::abs(direct - direct_c) + std::abs(composed - composed_c) + 1e-12;
            const double gap = std::abs(direct - composed);
            worst_gap = std::max(worst_gap, gap);
            worst_excess = std::max(worst_excess, gap / (3.0 * err));
          }
        }
      }
    }
    suite.at_most("semigroup_law_gap_over_3_quadrature_errors", worst_excess, 1.0,
                  "largest absolute gap " + std::to_string(worst_gap));
  }

  // Backward equation.
  {
    const auto lin = TestFunction::smooth([](const Vector& y) { return y(0); });
    double worst_lin = 0.0;
    for (const Vector& x : points)
      worst_lin = std::max(worst_lin, std::abs(backward_residual(lin, SemigroupTime(0.5), x, quad)));
    suite.near_zero("backward_residual_linear", worst_lin, 1e-6);
    for (const auto& [name, set] : catalog) {
      const TestFunction h = TestFunction::indicator(set);
      double worst = 0.0;
      for (double t : {0.1, 0.5, 1.0})
        for (const Vector& x : points) worst = std::max(worst, std::abs(backward_residual(h, SemigroupTime(t), x, quad)));
      suite.near_zero("backward_residual_" + name, worst, 1e-3);
      // Richardson: halving both steps should divide the residual by about 4.
      double worst_ratio = 1e300;
      for (int p = 0; p < 5; ++p) {
        const Vector& x = points[static_cast<std::size_t>(p)];
        const double big = backward_residual(h, SemigroupTime(0.5), x, quad, 4e-2, 4e-2);
        const double small = backward_residual(h, SemigroupTime(0.5), x, quad, 2e-2, 2e-2);
        if (std::abs(big) < 1e-8) continue;
        worst_ratio = std::min(worst_ratio, big / small);
      }
      if (worst_ratio < 1e300) suite.at_least("backward_richardson_ratio_" + name, worst_ratio, 3.0);
    }
  }

  // Contraction: |T_t h~(x)| non-increasing in t for half-spaces through the
  // origin at any x and centred balls at x = 0.
  {
    double worst_rise = 0.0;
    const std::vector<double> grid{0.05, 0.1, 0.2, 0.3, 0.5, 0.75, 1.0, 1.5, 2.0, 3.0, 5.0};
    const auto trace = [&](const ConvexSet& set, const Vector& x) {
      const double centre = quad.indicator_mass(set, Vector::Zero(k), 1.0);
      double prev = std::abs((contains(set, x) ? 1.0 : 0.0) - centre);
      for (double t : grid) {
        const double v = std::abs(semigroup_apply(TestFunction::indicator(set), SemigroupTime(t), x, quad) - centre);
        worst_rise = std::max(worst_rise, v - prev);
        prev = v;
      }
    };
    const ConvexSet through_origin = ConvexSet::half_space(normal, 0.0);
    for (const Vector& x : points) trace(through_origin, x);
    for (double r : {0.5, 1.0, 2.0}) trace(ConvexSet::ball(Vector::Zero(k), r), Vector::Zero(k));
    suite.near_zero("contraction_monotone_rise", std::max(0.0, worst_rise), 1e-10);
  }

  // Stationarity at t = 20.
  {
    double worst = 0.0;
    for (const auto& [name, set] : catalog) {
      const double centre = quad.indicator_mass(set, Vector::Zero(k), 1.0);
      for (const Vector& x : points)
        worst = std::max(worst, std::abs(semigroup_apply(TestFunction::indicator(set), SemigroupTime(20.0), x, quad) -
                                         centre));
    }
    suite.near_zero("stationary_limit_t20", worst, 1e-6);
  }
  return suite.take();
}

std::vector<CheckResult> stein_checks(int k, double t, std::uint64_t seed) {
  require_small_k(k, "check-stein");
  if (!(t >= 0.5)) throw ConfigError("check-stein: t must be at least 0.5");
  Suite suite("stein");
  RngStream rng(seed, 0x57e1ULL);
  const auto points = random_points(k, 20, seed, 1.0);
  const SemigroupTime st(t);
  const std::vector<std::pair<std::string, ConvexSet>> sets{
      {"half-space", ConvexSet::half_space(random_unit(k, rng), 0.3)},
      {"ball", ConvexSet::ball(Vector::Constant(k, 0.1), 1.2)}};

  for (const auto& [name, set] : sets) {
    const SteinSolution sol(set, st);
    double worst_res = 0.0, worst_d1 = 0.0, worst_d2 = 0.0, worst_d3 = 0.0;
    for (const Vector& x : points) {
      worst_res = std::max(worst_res, std::abs(stein_residual(sol, x)));
      for (int i = 0; i < k; ++i) {
        const Vector e = Vector::Unit(k, i);
        const double h1 = 1e-4;
        const double fd1 = (sol.psi(x + h1 * e) - sol.psi(x - h1 * e)) / (2.0 * h1);
        worst_d1 = std::max(worst_d1, std::abs(sol.d1(x, i) - fd1) / (std::abs(fd1) + 1e-6));
        const double h2 = 1e-3;
        const double fd2 = (sol.psi(x + h2 * e) - 2.0 * sol.psi(x) + sol.psi(x - h2 * e)) / (h2 * h2);
        worst_d2 = std::max(worst_d2, std::abs(sol.d2(x, i, i) - fd2) / (std::abs(fd2) + 1e-4));
        const double h3 = 1e-2;
        const double fd3 = (sol.psi(x + 2.0 * h3 * e) - 2.0 * sol.psi(x + h3 * e) + 2.0 * sol.psi(x - h3 * e) -
                            sol.psi(x - 2.0 * h3 * e)) /
                           (2.0 * h3 * h3 * h3);
        worst_d3 = std::max(worst_d3, std::abs(sol.d3(x, MultiIndex{i, i, i}) - fd3) / (std::abs(fd3) + 1e-3));
      }
    }
    suite.near_zero("stein_residual_" + name, worst_res, 1e-3);
    suite.near_zero("psi_d1_vs_finite_difference_" + name, worst_d1, 1e-3, "relative");
    suite.near_zero("psi_d2_vs_finite_difference_" + name, worst_d2, 1e-2, "relative");
    suite.near_zero("psi_d3_vs_finite_difference_" + name, worst_d3, 1e-2, "relative");
  }

  // Half-space {x_1 <= 0}: psi depends on x_1 alone and matches the 1D oracle.
  {
    const ConvexSet half = ConvexSet::half_space(Vector::Unit(k, 0), 0.0);
    const SteinSolution sol(half, st);
    double worst_sym = 0.0;
    for (double x1 : {-1.0, 0.0, 0.7}) {
      Vector x = Vector::Zero(k);
      x(0) = x1;
      const double base = sol.psi(x);
      for (const Vector& p : points) {
        Vector y = p;
        y(0) = x1;
        worst_sym = std::max(worst_sym, std::abs(sol.psi(y) - base));
      }
    }
    if (k > 1) suite.near_zero("psi_half_space_depends_on_x1_only", worst_sym, 1e-10);
    double worst_oracle = 0.0;
    for (double x1 : {0.0, 0.7, -1.3}) {
      Vector x = Vector::Zero(k);
      x(0) = x1;
      worst_oracle = std::max(worst_oracle, std::abs(sol.psi(x) - half_line_psi_oracle(0.0, x1, t)));
    }
    suite.near_zero("psi_half_space_1d_oracle", worst_oracle, 1e-4);
  }

  // Constant test functions give zero.
  {
    const SteinSolution whole(ConvexSet::whole_space(k), st);
    const SteinSolution none(ConvexSet::empty(k), st);
    double worst = 0.0;
    for (const Vector& x : points) {
      worst = std::max({worst, std::abs(whole.psi(x)), std::abs(whole.d3(x, MultiIndex{0, 0, 0})),
                        std::abs(none.psi(x)), std::abs(stein_residual(whole, x))});
    }
    suite.near_zero("constant_test_function_zero", worst, 0.0);
  }

  // Refinement: the residual at the coarsest s-rule should not be beaten by
  // more than rounding when the rule is doubled.
  {
    const ConvexSet& ball = sets[1].second;
    std::vector<double> worst;
    for (int nodes : {16, 32, 64}) {
      QuadratureSpec q = default_quadrature(k);
      q.s_nodes = nodes;
      const SteinSolution sol(ball, st, q);
      double w = 0.0;
      for (const Vector& x : points) w = std::max(w, std::abs(stein_residual(sol, x)));
      worst.push_back(w);
    }
    suite.report("stein_residual_s_nodes_16", worst[0]);
    suite.report("stein_residual_s_nodes_32", worst[1]);
    suite.report("stein_residual_s_nodes_64", worst[2]);
    const double floor = 1e-12;
    suite.at_most("stein_residual_refinement", std::max(worst[2] - floor, 0.0), std::max(worst[0], floor),
                  "doubling the s-rule does not increase the residual beyond rounding");
  }
  return suite.take();
}

std::vector<CheckResult> inequality_checks(int k, std::uint64_t seed) {
  if (k < 1) throw ConfigError("check-inequalities: k must be positive");
  Suite suite("inequalities");
  const double sqrt_two_over_pi = std::sqrt(2.0 / std::numbers::pi);
  const double one = abs_hermite_integral_numeric(1);
  const double two = abs_hermite_integral_numeric(2);
  const double three = abs_hermite_integral_numeric(3);

  struct Pattern {
    IndexPattern pattern;
    const char* name;
    int axes;
    double numeric;
    double closed;
    double bound;
  };
  const std::vector<Pattern> patterns{
      {IndexPattern::AllDistinct, "distinct", 3, one * one * one, std::pow(2.0 / std::numbers::pi, 1.5), 1.0},
      {IndexPattern::Pair, "pair", 2, two * one, 4.0 * normal_pdf(1.0) * sqrt_two_over_pi, 1.0},
      {IndexPattern::Triple, "triple", 1, three, 2.0 * normal_pdf(0.0) + 8.0 * normal_pdf(std::sqrt(3.0)),
       std::sqrt(6.0)}};
  for (const Pattern& p : patterns) {
    if (p.axes > k) continue;
    const std::string tag = std::string("abs_d3_integral_") + p.name;
    suite.near_zero(tag + "_quadrature_vs_closed_form", p.numeric - p.closed, 1e-10);
    suite.near_zero(tag + "_library_vs_closed_form", abs_d3_integral(p.pattern, k) - p.closed, 1e-10);
    suite.at_most(tag + "_bound", p.closed, p.bound);
  }

  // Vanishing moments of D_idx phi, exact for Gauss-Hermite of this degree.
  if (k <= 3) {
    const SectionIntegrator quad(k, default_inner_rule(k));
    double worst = 0.0;
    for (int a = 0; a < k; ++a)
      for (int b = a; b < k; ++b)
        for (int c = b; c < k; ++c) {
          const MultiIndex idx{a, b, c};
          // D_idx phi = (-1)^3 He_idx phi, so both integrals are Gaussian expectations.
          const auto he = [&](const Vector& z) { return d3_phi(z, idx) / phi(z); };
          worst = std::max(worst, std::abs(quad.expectation(he, Vector::Zero(k), 1.0)));
          for (int i0 = 0; i0 < k; ++i0)
            worst = std::max(worst, std::abs(quad.expectation([&](const Vector& z) { return z(i0) * he(z); },
                                                                Vector::Zero(k), 1.0)));
        }
    suite.near_zero("vanishing_moments", worst, 1e-8);
  }

  // Kernel weight inequality on random s.
  {
    RngStream rng(seed, 0x3141ULL);
    double worst = -1e300;
    for (int i = 0; i < 10000; ++i) {
      const double s = std::exp(std::log(1e-8) + rng.uniform() * (std::log(50.0) - std::log(1e-8)));
      worst = std::max(worst, kernel_weight(s) * std::sqrt(2.0 * s) - 1.0);
    }
    suite.at_most("kernel_weight_le_inverse_sqrt_2s", worst, 0.0, "max of w(s) sqrt(2s) - 1 over 10^4 draws");
  }
  for (double t : {0.01, 0.1, 0.5, 1.0}) {
    const double tail = kernel_weight_tail(3, t);
    const double u = std::exp(-t);
    const double closed = u / std::sqrt(1.0 - u * u) - std::asin(u);
    const std::string tag = "kernel_cube_tail_t" + std::to_string(t).substr(0, 4);
    suite.near_zero(tag + "_vs_closed_form", tail - closed, 1e-8);
    suite.at_most(tag + "_le_inverse_sqrt_2t", tail, 1.0 / std::sqrt(2.0 * t) + 1e-8);
  }
  {
    const double c0p = kernel_weight_tail(1, 0.0);
    suite.report("c0_prime", c0p, "integral of the kernel weight over (0, inf)");
    suite.near_zero("c0_prime_vs_half_pi", c0p - 0.5 * std::numbers::pi, 1e-8);
  }

  // Double-integral estimate: |left side| <= sqrt 6 for the half-space, and
  // the implied constant is reported.
  if (k <= 3) {
    const ConvexSet half = ConvexSet::half_space(Vector::Unit(k, 0), 0.0);
    InnerRule outer = default_inner_rule(k);
    outer.nodes = 16;
    InnerRule outer_fine = outer;
    outer_fine.nodes = 32;
    const auto grid = translate_grid(k);
    const auto report = verify_double_integral_bound(half, 10, 2.0, MultiIndex{0, 0, 0}, grid, outer,
                                                     default_inner_rule(k));
    const auto fine = verify_double_integral_bound(half, 10, 2.0, MultiIndex{0, 0, 0}, grid, outer_fine,
                                                   default_inner_rule(k));
    suite.at_most("double_integral_left_side_le_sqrt6", report.max_abs, std::sqrt(6.0));
    suite.report("double_integral_implied_c0", report.ratio);
    const double drift = std::abs(fine.ratio - report.ratio) / std::max(report.ratio, 1e-300);
    suite.at_most("double_integral_ratio_refinement_drift", drift, 0.2);
  }
  return suite.take();
}

}  // namespace stein
