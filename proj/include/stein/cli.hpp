#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "stein/bounds.hpp"
#include "stein/family.hpp"

namespace stein {

inline constexpr int kExitOk = 0;
inline constexpr int kExitSuiteFailure = 1;
inline constexpr int kExitConfigError = 2;

enum class OutputFormat { Csv, Json, Both };

/// Everything a subcommand reads. Defaults, then the --config file, then
/// explicit flags.
struct ExperimentConfig {
  std::string subcommand;
  int k = 1;
  int n = 16;
  std::vector<int> k_list{1, 2, 3, 4};
  std::vector<int> n_list{4, 16, 64, 256};
  bool n_list_given = false;  ///< bounds iterates n_list instead of n
  std::string source = "gaussian";
  std::vector<std::string> sources{"rademacher", "uniform"};
  std::optional<FamilySpec> family;  ///< unset: default family seeded from `seed`
  std::size_t M = 100000;
  std::optional<double> t;  ///< unset: "auto"
  double alpha = kSevenEighths;
  std::uint64_t seed = 1;
  int threads = 0;
  std::string out;
  OutputFormat format = OutputFormat::Csv;
  ConstantsConfig constants;
  std::optional<nlohmann::json> set;  ///< convex set for `discrepancy`

  /// Throws ConfigError on k < 1, M < 1000, n < 1, t <= 0 and the like.
  void validate() const;
  /// The family for dimension k.
  FamilySpec family_for(int k) const;
};

nlohmann::json to_json(const ExperimentConfig& config);
/// Overlays the keys of j on base; unknown keys are a ConfigError.
ExperimentConfig experiment_config_from_json(const nlohmann::json& j, ExperimentConfig base = {});

/// Parses argv, runs one subcommand and writes its report. Diagnostics go to
/// err as a single line. Returns kExitOk, kExitSuiteFailure or kExitConfigError.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace stein
