#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"
#include "stein/convex.hpp"

namespace stein {

/// A finite list of convex sets standing in for the supremum over all
/// convex sets. Estimates taken over a family bound the full supremum from
/// below.
struct SetFamily {
  std::vector<ConvexSet> sets;
  std::string description;

  int dim() const;
  /// Throws ConfigError when empty or of mixed dimension.
  void validate() const;
};

/// Parameters of the default family builder.
struct FamilySpec {
  int k = 1;
  int halfspace_directions = 32;
  int halfspace_offsets = 17;
  double offset_range = 4.0;  ///< offsets span [-range, range]
  int ball_radii = 17;
  int box_sizes = 9;
  std::uint64_t seed = 1;
  std::string description = "default";
  std::vector<ConvexSet> extra;  ///< explicit sets appended after the generated ones
};

/// Half-spaces along random unit directions at evenly spaced offsets,
/// centred balls at the chi quantiles j / (radii + 1), and centred cubes
/// with Gaussian mass j / (sizes + 1).
SetFamily build_family(const FamilySpec& spec);

/// Translations used to approximate the supremum over shifts: the origin and
/// +-step along every axis.
std::vector<Vector> translate_grid(int k, double step = 0.5);

nlohmann::json to_json(const ConvexSet& set);
ConvexSet convex_set_from_json(const nlohmann::json& j);

nlohmann::json to_json(const FamilySpec& spec);
FamilySpec family_spec_from_json(const nlohmann::json& j);

}  // namespace stein
