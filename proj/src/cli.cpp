#include "stein/cli.hpp"

#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "stein/checks.hpp"
#include "stein/report.hpp"

namespace stein {

namespace {

const std::vector<std::string> kSubcommands{"check-semigroup", "check-stein", "check-inequalities", "delta",
                                            "discrepancy",     "bounds",      "dim-scan"};

std::string format_name(OutputFormat f) {
  switch (f) {
    case OutputFormat::Csv: return "csv";
    case OutputFormat::Json: return "json";
    case OutputFormat::Both: return "both";
  }
  return "csv";
}

OutputFormat format_from_string(const std::string& s) {
  if (s == "csv") return OutputFormat::Csv;
  if (s == "json") return OutputFormat::Json;
  if (s == "both") return OutputFormat::Both;
  throw ConfigError("unknown format '" + s + "' (expected csv, json or both)");
}

std::optional<double> time_from_string(const std::string& s) {
  if (s == "auto") return std::nullopt;
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != s.size() || s.empty()) throw ConfigError("--t expects a number or 'auto', got '" + s + "'");
  return v;
}

}  // namespace

void ExperimentConfig::validate() const {
  if (k < 1) throw ConfigError("k must be at least 1");
  if (n < 1) throw ConfigError("n must be at least 1");
  if (M < 1000) throw ConfigError("M must be at least 1000");
  if (threads < 0) throw ConfigError("threads must be non-negative");
  if (t && !(*t > 0.0 && std::isfinite(*t))) throw ConfigError("t must be positive");
  if (!(alpha > 0.5 && alpha < 1.0)) throw ConfigError("alpha must lie in (1/2, 1)");
  if (k_list.empty() || n_list.empty() || sources.empty()) throw ConfigError("k_list, n_list and sources must be non-empty");
  for (int v : k_list)
    if (v < 1) throw ConfigError("k_list entries must be at least 1");
  for (int v : n_list)
    if (v < 1) throw ConfigError("n_list entries must be at least 1");
  source_kind_from_string(source);
  for (const auto& s : sources) source_kind_from_string(s);
  constants.validate();
  if (family && !family->extra.empty() && family->k != k)
    throw ConfigError("family spec lists explicit sets of dimension " + std::to_string(family->k) + " but k = " +
                      std::to_string(k));
}

FamilySpec ExperimentConfig::family_for(int dim) const {
  FamilySpec spec = family.value_or(FamilySpec{});
  if (!family) spec.seed = seed;
  if (spec.k != dim) spec.extra.clear();
  spec.k = dim;
  return spec;
}

nlohmann::json to_json(const ExperimentConfig& c) {
  nlohmann::json j{{"subcommand", c.subcommand},
                   {"k", c.k},
                   {"n", c.n},
                   {"k_list", c.k_list},
                   {"n_list", c.n_list},
                   {"source", c.source},
                   {"sources", c.sources},
                   {"M", c.M},
                   {"alpha", c.alpha},
                   {"seed", c.seed},
                   {"threads", c.threads},
                   {"out", c.out},
                   {"format", format_name(c.format)},
                   {"constants", to_json(c.constants)}};
  j["t"] = c.t ? nlohmann::json(*c.t) : nlohmann::json("auto");
  j["family"] = to_json(c.family_for(c.k));
  if (c.set) j["set"] = *c.set;
  return j;
}

ExperimentConfig experiment_config_from_json(const nlohmann::json& j, ExperimentConfig c) {
  if (!j.is_object()) throw ConfigError("config file must hold a JSON object");
  try {
    for (const auto& [key, v] : j.items()) {
      if (key == "k") c.k = v.get<int>();
      else if (key == "n") c.n = v.get<int>();
      else if (key == "k_list") c.k_list = v.get<std::vector<int>>();
      else if (key == "n_list") {
        c.n_list = v.get<std::vector<int>>();
        c.n_list_given = true;
      } else if (key == "source") c.source = v.get<std::string>();
      else if (key == "sources") c.sources = v.get<std::vector<std::string>>();
      else if (key == "family") c.family = family_spec_from_json(v);
      else if (key == "M") c.M = v.get<std::size_t>();
      else if (key == "t") c.t = v.is_string() ? time_from_string(v.get<std::string>()) : std::optional(v.get<double>());
      else if (key == "alpha") c.alpha = v.get<double>();
      else if (key == "seed") c.seed = v.get<std::uint64_t>();
      else if (key == "threads") c.threads = v.get<int>();
      else if (key == "out") c.out = v.get<std::string>();
      else if (key == "format") c.format = format_from_string(v.get<std::string>());
      else if (key == "constants") c.constants = constants_from_json(v, c.constants);
      else if (key == "set") c.set = v;
      else if (key == "subcommand") continue;
      else throw ConfigError("unknown config key '" + key + "'");
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config file: ") + e.what());
  }
  return c;
}

namespace {

struct Outcome {
  Table table;
  nlohmann::json summary = nlohmann::json::object();
  bool suite_failed = false;
};

Outcome report_checks(const std::vector<CheckResult>& results) {
  Outcome o{Table{"checks", {"suite", "name", "status", "value", "tolerance", "detail"}, {}}};
  for (const auto& r : results) {
    const std::string status = r.monitored ? "MONITOR" : (r.passed ? "PASS" : "FAIL");
    o.table.add({r.suite, r.name, status, r.value, r.tolerance, r.detail});
  }
  o.suite_failed = !all_passed(results);
  o.summary = {{"checks", results.size()}, {"passed", !o.suite_failed}};
  return o;
}

SetFamily family_for(const ExperimentConfig& c, int k) { return build_family(c.family_for(k)); }

Outcome run_delta(const ExperimentConfig& c) {
  const SourceKind kind = source_kind_from_string(c.source);
  const SetFamily family = family_for(c, c.k);
  const SumLaw law = SumLaw::iid(SourceDistribution(kind, c.k), c.n);
  const DeltaEstimate d = delta_hat(law, family, c.M, c.seed, c.threads);
  Outcome o{Table{"delta",
                  {"k", "n", "source", "family", "M", "seed", "delta_hat", "std_error", "max_set_error", "argmax"},
                  {}}};
  o.table.add({std::int64_t{c.k}, std::int64_t{c.n}, to_string(kind), family.description,
               static_cast<std::int64_t>(c.M), static_cast<std::int64_t>(c.seed), d.value, d.std_error,
               d.max_set_error, static_cast<std::int64_t>(d.argmax)});
  o.summary = {{"argmax_set", to_json(family.sets.at(d.argmax))}, {"family_size", family.sets.size()}};
  return o;
}

Outcome run_discrepancy(const ExperimentConfig& c) {
  const SourceKind kind = source_kind_from_string(c.source);
  const ConvexSet set = c.set ? convex_set_from_json(*c.set) : ConvexSet::ball(Vector::Zero(c.k), 1.0);
  if (set.dim() != c.k)
    throw ConfigError("set has dimension " + std::to_string(set.dim()) + " but k = " + std::to_string(c.k));
  const SemigroupTime t(c.t.value_or(1.0));
  const SumLaw law = SumLaw::iid(SourceDistribution(kind, c.k), c.n);
  const SteinDiscrepancy r = stein_discrepancy_hat(law, t, set, c.M, default_quadrature(c.k), c.seed, c.threads);
  Outcome o{Table{"discrepancy",
                  {"k", "n", "source", "t", "M", "seed", "smoothed", "smoothed_se", "stein", "stein_se", "difference",
                   "combined_error"},
                  {}}};
  o.table.add({std::int64_t{c.k}, std::int64_t{c.n}, to_string(kind), t.value(), static_cast<std::int64_t>(c.M),
               static_cast<std::int64_t>(c.seed), r.direct.value, r.direct.std_error, r.stein.value, r.stein.std_error,
               r.difference, r.combined_error});
  o.summary = {{"set", to_json(set)}};
  return o;
}

Outcome run_bounds(const ExperimentConfig& c) {
  const SourceKind kind = source_kind_from_string(c.source);
  const SourceDistribution src(kind, c.k);
  const SetFamily family = family_for(c, c.k);
  const std::vector<int> ns = c.n_list_given ? c.n_list : std::vector<int>{c.n};
  Outcome o{Table{"bounds",
                  {"k", "n", "source", "t", "rho3", "beta3", "gamma3", "delta_prev", "delta_hat", "std_error",
                   "rhs_316", "rhs_411", "optimal_t", "rhs_412", "theorem_bound", "noniid_bound", "gamma_bound",
                   "implied_c", "within_theorem"},
                  {}}};
  double worst_implied = 0.0;
  double rho3 = 0.0;
  for (int n : ns) {
    const auto estimate_at = [&](int m) {
      return delta_hat(SumLaw::iid(src, m), family, c.M, cell_seed(c.seed, kind, c.k, m), c.threads);
    };
    const double delta_prev = n >= 2 ? estimate_at(n - 1).value : 1.0;
    const DeltaEstimate d = estimate_at(n);
    BoundReport b = evaluate_bounds(src, n, delta_prev, c.t.value_or(0.0), c.constants);
    b.delta = d;
    b.within_theorem = d.value <= b.theorem_bound;
    rho3 = b.rho3;
    const double implied = d.value / (std::pow(c.k, 2.5) * b.rho3 / std::sqrt(static_cast<double>(n)));
    worst_implied = std::max(worst_implied, implied);
    o.table.add({std::int64_t{c.k}, std::int64_t{n}, b.source, b.t, b.rho3, b.beta3, b.gamma3, b.delta_prev, d.value,
                 d.std_error, b.rhs_316, b.rhs_411, b.optimal_t, b.rhs_412, b.theorem_bound,
                 b.noniid_bound.value_or(std::nan("")), b.gamma_bound, implied, b.within_theorem});
  }
  const RecursionCertificate cert = recursion_certify(c.k, rho3, 1000000, c.constants);
  const RecursionCertificate configured = recursion_certify(c.k, rho3, 1000000, c.constants, c.constants.c9);
  const SmoothingParams sp = SmoothingParams::make(c.k, SemigroupTime(c.t.value_or(1.0)), c.alpha);
  const ConvexSet ball = ConvexSet::ball(Vector::Zero(c.k), sp.a_k);
  o.summary = {{"max_implied_c", worst_implied},
               {"induction",
                {{"c_star", cert.c_star},
                 {"c9_used", cert.c9_used},
                 {"envelope_holds", cert.envelope_holds},
                 {"n_star", cert.n_star},
                 {"worst_margin", cert.worst_margin},
                 {"configured_c9", configured.c9_used},
                 {"configured_envelope_holds", configured.envelope_holds},
                 {"configured_worst_margin", configured.worst_margin}}},
               {"smoothing",
                {{"t", sp.t.value()},
                 {"alpha", sp.alpha},
                 {"a_k", sp.a_k},
                 {"eps", sp.eps},
                 {"prefactor", smoothing_prefactor(sp.alpha)},
                 {"omega_star_ratio_ball_a_k", omega_star_ratio(ball, sp.eps, sp.t)}}}};
  return o;
}

nlohmann::json fit_json(const ExponentFit& f) {
  return {{"defined", f.defined},
          {"slope", f.slope},
          {"std_error", f.std_error},
          {"ci_half_width", f.ci_half_width},
          {"note", f.note}};
}

Outcome run_dim_scan(const ExperimentConfig& c) {
  std::vector<SourceKind> kinds;
  for (const auto& s : c.sources) kinds.push_back(source_kind_from_string(s));
  const ScanReport scan =
      dim_scan(kinds, c.k_list, c.n_list, [&](int k) { return family_for(c, k); }, c.M, c.seed, c.threads);
  Outcome o{Table{"dim-scan",
                  {"source", "k", "n", "M", "seed", "delta_hat", "std_error", "max_set_error", "sqrt_n_delta"},
                  {}}};
  for (const auto& cell : scan.cells)
    o.table.add({cell.source, std::int64_t{cell.k}, std::int64_t{cell.n}, static_cast<std::int64_t>(c.M),
                 static_cast<std::int64_t>(cell.delta.seed), cell.delta.value, cell.delta.std_error,
                 cell.delta.max_set_error, cell.delta.value * std::sqrt(static_cast<double>(cell.n))});
  nlohmann::json k_fits = nlohmann::json::array();
  for (std::size_t i = 0; i < scan.k_fits.size(); ++i) {
    auto f = fit_json(scan.k_fits[i]);
    f["source"] = scan.k_fit_keys[i].first;
    f["n"] = scan.k_fit_keys[i].second;
    k_fits.push_back(std::move(f));
  }
  nlohmann::json n_fits = nlohmann::json::array();
  for (std::size_t i = 0; i < scan.n_fits.size(); ++i) {
    auto f = fit_json(scan.n_fits[i]);
    f["source"] = scan.n_fit_keys[i].first;
    f["k"] = scan.n_fit_keys[i].second;
    n_fits.push_back(std::move(f));
  }
  o.summary = {{"k_exponents", k_fits}, {"n_exponents", n_fits}};
  return o;
}

Outcome dispatch(const ExperimentConfig& c) {
  if (c.subcommand == "check-semigroup") return report_checks(semigroup_checks(c.k, c.seed));
  if (c.subcommand == "check-stein") return report_checks(stein_checks(c.k, c.t.value_or(0.5), c.seed));
  if (c.subcommand == "check-inequalities") return report_checks(inequality_checks(c.k, c.seed));
  if (c.subcommand == "delta") return run_delta(c);
  if (c.subcommand == "discrepancy") return run_discrepancy(c);
  if (c.subcommand == "bounds") return run_bounds(c);
  if (c.subcommand == "dim-scan") return run_dim_scan(c);
  throw ConfigError("unknown subcommand '" + c.subcommand + "'");
}

std::string with_extension(const std::string& path, const std::string& ext) {
  const auto slash = path.find_last_of('/');
  const auto dot = path.find_last_of('.');
  const bool has_ext = dot != std::string::npos && (slash == std::string::npos || dot > slash);
  return (has_ext ? path.substr(0, dot) : path) + ext;
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot open output file '" + path + "'");
  f << text;
  if (!f) throw ConfigError("cannot write output file '" + path + "'");
}

void emit(const ExperimentConfig& c, const Outcome& o, std::ostream& out) {
  std::ostringstream csv;
  write_csv(csv, o.table);
  const std::string json = report_json(o.table, to_json(c), o.summary).dump(2) + "\n";
  const bool want_csv = c.format != OutputFormat::Json;
  const bool want_json = c.format != OutputFormat::Csv;
  if (c.out.empty()) {
    if (want_csv) out << csv.str();
    if (want_json) out << json;
    return;
  }
  if (c.format == OutputFormat::Both) {
    write_file(with_extension(c.out, ".csv"), csv.str());
    write_file(with_extension(c.out, ".json"), json);
  } else {
    write_file(c.out, want_csv ? csv.str() : json);
  }
}

struct Flags {
  std::string config;
  int k = 0, n = 0, threads = 0;
  std::uint64_t seed = 0;
  std::size_t M = 0;
  double alpha = 0.0;
  std::string t, out, format, source, set;
  std::vector<int> k_list, n_list;
  std::vector<std::string> sources;
};

void add_flags(CLI::App* sub, Flags& f) {
  sub->add_option("--config", f.config, "JSON config file; flags override its values");
  sub->add_option("--seed", f.seed, "master seed");
  sub->add_option("--threads", f.threads, "worker threads (0 = hardware concurrency)");
  sub->add_option("--out", f.out, "output path (stdout when absent)");
  sub->add_option("--format", f.format, "csv, json or both");
  sub->add_option("--k", f.k, "dimension");
  sub->add_option("--n", f.n, "number of summands");
  sub->add_option("--source", f.source, "gaussian, rademacher, uniform or exponential");
  sub->add_option("--M", f.M, "Monte Carlo draws of S_n");
  sub->add_option("--t", f.t, "OU time or 'auto'");
  sub->add_option("--alpha", f.alpha, "smoothing mass level");
  sub->add_option("--k-list", f.k_list, "dimensions for dim-scan")->delimiter(',');
  sub->add_option("--n-list", f.n_list, "sample sizes for dim-scan and bounds")->delimiter(',');
  sub->add_option("--sources", f.sources, "sources for dim-scan")->delimiter(',');
  sub->add_option("--set", f.set, "convex set as JSON for discrepancy");
}

ExperimentConfig resolve(const CLI::App& sub, const Flags& f) {
  ExperimentConfig c;
  if (sub.count("--config")) {
    std::ifstream in(f.config);
    if (!in) throw ConfigError("cannot read config file '" + f.config + "'");
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError("config file '" + f.config + "': " + e.what());
    }
    c = experiment_config_from_json(j, c);
  }
  c.subcommand = sub.get_name();
  if (sub.count("--seed")) c.seed = f.seed;
  if (sub.count("--threads")) c.threads = f.threads;
  if (sub.count("--out")) c.out = f.out;
  if (sub.count("--format")) c.format = format_from_string(f.format);
  if (sub.count("--k")) c.k = f.k;
  if (sub.count("--n")) c.n = f.n;
  if (sub.count("--source")) c.source = f.source;
  if (sub.count("--M")) c.M = f.M;
  if (sub.count("--t")) c.t = time_from_string(f.t);
  if (sub.count("--alpha")) c.alpha = f.alpha;
  if (sub.count("--k-list")) c.k_list = f.k_list;
  if (sub.count("--n-list")) {
    c.n_list = f.n_list;
    c.n_list_given = true;
  }
  if (sub.count("--sources")) c.sources = f.sources;
  if (sub.count("--set")) {
    try {
      c.set = nlohmann::json::parse(f.set);
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError(std::string("--set: ") + e.what());
    }
  }
  c.validate();
  return c;
}

std::string one_line(std::string s) {
  for (char& ch : s)
    if (ch == '\n' || ch == '\r') ch = ' ';
  while (!s.empty() && s.back() == ' ') s.pop_back();
  return s;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Numerical companion for a multivariate Berry-Esseen bound via Stein's method", "stein-be"};
  app.require_subcommand(1, 1);
  Flags flags;
  for (const auto& name : kSubcommands) add_flags(app.add_subcommand(name), flags);
  app.get_subcommand("check-semigroup")->description("semigroup and generator property suite (k <= 3)");
  app.get_subcommand("check-stein")->description("Stein solution identity and derivative suite (k <= 3)");
  app.get_subcommand("check-inequalities")->description("Gaussian derivative integrals and kernel weight bounds");
  app.get_subcommand("delta")->description("discrepancy of S_n over the set family");
  app.get_subcommand("discrepancy")->description("both sides of the smoothed Stein identity on S_n");
  app.get_subcommand("bounds")->description("right-hand sides of the recursive bounds with delta estimates");
  app.get_subcommand("dim-scan")->description("delta over a grid of sources, dimensions and sample sizes");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "stein-be: error: " << one_line(e.what()) << '\n';
    return kExitConfigError;
  }

  try {
    const CLI::App* sub = app.get_subcommands().front();
    const ExperimentConfig config = resolve(*sub, flags);
    const Outcome outcome = dispatch(config);
    emit(config, outcome, out);
    return outcome.suite_failed ? kExitSuiteFailure : kExitOk;
  } catch (const std::exception& e) {
    err << "stein-be: error: " << one_line(e.what()) << '\n';
    return kExitConfigError;
  }
}

}  // namespace stein
