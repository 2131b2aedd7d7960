#include "stein/family.hpp"

#include <cmath>
#include <limits>

namespace stein {

namespace {

nlohmann::json vector_json(const Vector& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

Vector vector_from(const nlohmann::json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_array()) throw ConfigError(std::string("set spec: missing array '") + key + "'");
  const auto values = j.at(key).get<std::vector<double>>();
  return Eigen::Map<const Vector>(values.data(), static_cast<Eigen::Index>(values.size()));
}

double number_from(const nlohmann::json& j, const char* key) {
  if (!j.contains(key)) throw ConfigError(std::string("set spec: missing '") + key + "'");
  const auto& v = j.at(key);
  if (v.is_string() && v.get<std::string>() == "inf") return std::numeric_limits<double>::infinity();
  if (!v.is_number()) throw ConfigError(std::string("set spec: '") + key + "' must be a number");
  return v.get<double>();
}

}  // namespace

int SetFamily::dim() const {
  if (sets.empty()) throw ConfigError("set family is empty");
  return sets.front().dim();
}

void SetFamily::validate() const {
  const int k = dim();
  for (const auto& s : sets)
    if (s.dim() != k) throw ConfigError("set family mixes dimensions");
}

SetFamily build_family(const FamilySpec& spec) {
  if (spec.k < 1) throw ConfigError("family: k must be positive");
  if (spec.halfspace_directions < 0 || spec.halfspace_offsets < 0 || spec.ball_radii < 0 || spec.box_sizes < 0)
    throw ConfigError("family: counts must be nonnegative");
  const int k = spec.k;
  SetFamily family;
  family.description = spec.description;

  RngStream directions(spec.seed, 0xd1ec7ULL);
  for (int d = 0; d < spec.halfspace_directions; ++d) {
    Vector u(k);
    do {
      for (int i = 0; i < k; ++i) u(i) = directions.normal();
    } while (u.norm() < 1e-8);
    u.normalize();
    for (int o = 0; o < spec.halfspace_offsets; ++o) {
      const double offset = spec.halfspace_offsets == 1
                                ? 0.0
                                : -spec.offset_range + 2.0 * spec.offset_range * o / (spec.halfspace_offsets - 1);
      family.sets.push_back(ConvexSet::half_space(u, offset));
    }
  }
  for (int r = 1; r <= spec.ball_radii; ++r) {
    const double mass = static_cast<double>(r) / (spec.ball_radii + 1);
    family.sets.push_back(ConvexSet::ball(Vector::Zero(k), quantile_a(k, mass).a_k));
  }
  for (int b = 1; b <= spec.box_sizes; ++b) {
    const double mass = static_cast<double>(b) / (spec.box_sizes + 1);
    const double half = normal_quantile(0.5 * (1.0 + std::pow(mass, 1.0 / k)));
    family.sets.push_back(ConvexSet::box(Vector::Constant(k, -half), Vector::Constant(k, half)));
  }
  for (const auto& s : spec.extra) family.sets.push_back(s);
  family.validate();
  return family;
}

std::vector<Vector> translate_grid(int k, double step) {
  std::vector<Vector> grid{Vector::Zero(k)};
  for (int i = 0; i < k; ++i) {
    grid.push_back(step * Vector::Unit(k, i));
    grid.push_back(-step * Vector::Unit(k, i));
  }
  return grid;
}

nlohmann::json to_json(const ConvexSet& set) {
  nlohmann::json j;
  j["variant"] = set.kind();
  std::visit(
      [&](const auto& body) {
        using T = std::decay_t<decltype(body)>;
        if constexpr (std::is_same_v<T, HalfSpace>) {
          j["normal"] = vector_json(body.normal);
          if (std::isinf(body.offset)) j["offset"] = "inf";
          else j["offset"] = body.offset;
        } else if constexpr (std::is_same_v<T, Ball>) {
          j["center"] = vector_json(body.center);
          j["radius"] = body.radius;
        } else if constexpr (std::is_same_v<T, Ellipsoid>) {
          j["center"] = vector_json(body.center);
          nlohmann::json rows = nlohmann::json::array();
          for (Eigen::Index r = 0; r < body.shape.rows(); ++r) rows.push_back(vector_json(body.shape.row(r).transpose()));
          j["shape"] = rows;
        } else if constexpr (std::is_same_v<T, Box>) {
          j["lower"] = vector_json(body.lower);
          j["upper"] = vector_json(body.upper);
        } else if constexpr (std::is_same_v<T, Offset>) {
          j["base"] = std::visit([](const auto& base) { return to_json(ConvexSet(base)); }, body.base);
          j["delta"] = body.delta;
        } else {
          j["k"] = body.dim;
        }
      },
      set.variant());
  return j;
}

ConvexSet convex_set_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("variant")) throw ConfigError("set spec: expected an object with 'variant'");
  const auto variant = j.at("variant").get<std::string>();
  try {
    if (variant == "half-space") return ConvexSet::half_space(vector_from(j, "normal"), number_from(j, "offset"));
    if (variant == "ball") return ConvexSet::ball(vector_from(j, "center"), number_from(j, "radius"));
    if (variant == "box") return ConvexSet::box(vector_from(j, "lower"), vector_from(j, "upper"));
    if (variant == "ellipsoid") {
      const Vector center = vector_from(j, "center");
      const auto rows = j.at("shape").get<std::vector<std::vector<double>>>();
      Matrix shape(center.size(), center.size());
      if (static_cast<Eigen::Index>(rows.size()) != center.size()) throw ConfigError("set spec: shape must be k x k");
      for (Eigen::Index r = 0; r < shape.rows(); ++r) {
        if (static_cast<Eigen::Index>(rows[static_cast<std::size_t>(r)].size()) != center.size())
          throw ConfigError("set spec: shape must be k x k");
        for (Eigen::Index c = 0; c < shape.cols(); ++c) shape(r, c) = rows[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)];
      }
      return ConvexSet::ellipsoid(center, shape);
    }
    if (variant == "offset") {
      const ConvexSet base = convex_set_from_json(j.at("base"));
      const double delta = number_from(j, "delta");
      return delta >= 0.0 ? dilate(base, delta) : erode(base, -delta);
    }
    if (variant == "empty") return ConvexSet::empty(j.at("k").get<int>());
  } catch (const DomainError& e) {
    throw ConfigError(std::string("set spec: ") + e.what());
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("set spec: ") + e.what());
  }
  throw ConfigError("set spec: unknown variant '" + variant + "'");
}

nlohmann::json to_json(const FamilySpec& spec) {
  nlohmann::json j{{"k", spec.k},
                   {"halfspace_directions", spec.halfspace_directions},
                   {"halfspace_offsets", spec.halfspace_offsets},
                   {"offset_range", spec.offset_range},
                   {"ball_radii", spec.ball_radii},
                   {"box_sizes", spec.box_sizes},
                   {"seed", spec.seed},
                   {"description", spec.description}};
  nlohmann::json extra = nlohmann::json::array();
  for (const auto& s : spec.extra) extra.push_back(to_json(s));
  j["sets"] = extra;
  return j;
}

FamilySpec family_spec_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigError("family spec must be an object");
  FamilySpec spec;
  try {
    spec.k = j.value("k", spec.k);
    spec.halfspace_directions = j.value("halfspace_directions", spec.halfspace_directions);
    spec.halfspace_offsets = j.value("halfspace_offsets", spec.halfspace_offsets);
    spec.offset_range = j.value("offset_range", spec.offset_range);
    spec.ball_radii = j.value("ball_radii", spec.ball_radii);
    spec.box_sizes = j.value("box_sizes", spec.box_sizes);
    spec.seed = j.value("seed", spec.seed);
    spec.description = j.value("description", spec.description);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("family spec: ") + e.what());
  }
  if (j.contains("sets")) {
    for (const auto& s : j.at("sets")) spec.extra.push_back(convex_set_from_json(s));
  }
  for (const auto& s : spec.extra)
    if (s.dim() != spec.k) throw ConfigError("family spec: explicit set dimension differs from k");
  return spec;
}

}  // namespace stein
