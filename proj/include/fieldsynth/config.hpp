#pragma once

#include <charconv>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "fieldsynth/camera.hpp"
#include "fieldsynth/errors.hpp"
#include "fieldsynth/field_geometry.hpp"
#include "fieldsynth/randomization.hpp"

namespace fieldsynth {

inline constexpr int kDefaultSampleCount = 20000;

struct DatasetConfig {
  DatasetVariant variant = DatasetVariant::SOCCERSYNTH_FIELD;
  int sample_count = kDefaultSampleCount;
  std::uint64_t master_seed = 0;
  std::filesystem::path output_root = "dataset";
  Resolution resolution{};
  FieldDimensions field{};
  CameraRanges camera{};
  IntRange fake_line_count_range{1, 4};
  IntRange player_count_range{14, 22};
  double audience_probability = 0.75;
  bool emit_diagnostic_mask = false;

  void validate() const {
    if (sample_count < 1) throw ConfigError("sample_count must be >= 1");
    if (resolution.width <= 0 || resolution.height <= 0) throw ConfigError("resolution must be positive");
    try {
      field.validate();
    } catch (const InvalidDimensions& e) {
      throw ConfigError(std::string("field: ") + e.what());
    }
    if (camera.focal_min <= 0 || camera.focal_max < camera.focal_min) throw ConfigError("camera focal range invalid");
    if (camera.max_attempts < 1) throw ConfigError("camera.max_attempts must be >= 1");
    randomization().validate();
  }

  RandomizationConfig randomization() const {
    RandomizationConfig r = variant_config(variant);
    r.fake_line_count_range = fake_line_count_range;
    r.player_count_range = player_count_range;
    r.audience_probability = audience_probability;
    r.camera = camera;
    return r;
  }
};

namespace detail {

inline std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

inline double parse_double(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    const double d = std::stod(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    throw ConfigError("key '" + key + "': expected a number, got '" + v + "'");
  }
}

inline long long parse_int(const std::string& key, const std::string& v) {
  long long out = 0;
  const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || p != v.data() + v.size())
    throw ConfigError("key '" + key + "': expected an integer, got '" + v + "'");
  return out;
}

inline std::uint64_t parse_u64(const std::string& key, const std::string& v) {
  std::uint64_t out = 0;
  const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || p != v.data() + v.size())
    throw ConfigError("key '" + key + "': expected an unsigned integer, got '" + v + "'");
  return out;
}

inline bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ConfigError("key '" + key + "': expected true/false, got '" + v + "'");
}

using Setter = std::function<void(DatasetConfig&, const std::string& key, const std::string& value)>;

inline const std::map<std::string, Setter, std::less<>>& config_setters() {
  static const auto setters = [] {
    std::map<std::string, Setter, std::less<>> m;
    const auto dbl = [&m](std::string key, auto member_ref) {
      m[key] = [member_ref](DatasetConfig& c, const std::string& k, const std::string& v) {
        member_ref(c) = parse_double(k, v);
      };
    };
    const auto integer = [&m](std::string key, auto member_ref) {
      m[key] = [member_ref](DatasetConfig& c, const std::string& k, const std::string& v) {
        member_ref(c) = static_cast<int>(parse_int(k, v));
      };
    };
    m["variant"] = [](DatasetConfig& c, const std::string&, const std::string& v) {
      const auto parsed = parse_variant(v);
      if (!parsed) throw ConfigError("unknown variant '" + v + "'");
      c.variant = *parsed;
    };
    integer("sample_count", [](DatasetConfig& c) -> int& { return c.sample_count; });
    m["master_seed"] = [](DatasetConfig& c, const std::string& k, const std::string& v) {
      c.master_seed = parse_u64(k, v);
    };
    m["output_root"] = [](DatasetConfig& c, const std::string&, const std::string& v) { c.output_root = v; };
    m["resolution"] = [](DatasetConfig& c, const std::string& k, const std::string& v) {
      const auto x = v.find('x');
      if (x == std::string::npos) throw ConfigError("key '" + k + "': expected WIDTHxHEIGHT");
      c.resolution = {static_cast<int>(parse_int(k, v.substr(0, x))), static_cast<int>(parse_int(k, v.substr(x + 1)))};
    };
    m["emit_diagnostic_mask"] = [](DatasetConfig& c, const std::string& k, const std::string& v) {
      c.emit_diagnostic_mask = parse_bool(k, v);
    };
    dbl("field.length", [](DatasetConfig& c) -> double& { return c.field.length; });
    dbl("field.width", [](DatasetConfig& c) -> double& { return c.field.width; });
    dbl("field.circle_radius", [](DatasetConfig& c) -> double& { return c.field.circle_radius; });
    dbl("field.penalty_area_depth", [](DatasetConfig& c) -> double& { return c.field.penalty_area_depth; });
    dbl("field.penalty_area_width", [](DatasetConfig& c) -> double& { return c.field.penalty_area_width; });
    dbl("field.goal_area_depth", [](DatasetConfig& c) -> double& { return c.field.goal_area_depth; });
    dbl("field.goal_area_width", [](DatasetConfig& c) -> double& { return c.field.goal_area_width; });
    dbl("field.penalty_spot_distance", [](DatasetConfig& c) -> double& { return c.field.penalty_spot_distance; });
    dbl("field.goal_width", [](DatasetConfig& c) -> double& { return c.field.goal_width; });
    dbl("field.goal_height", [](DatasetConfig& c) -> double& { return c.field.goal_height; });
    dbl("field.line_width", [](DatasetConfig& c) -> double& { return c.field.line_width; });
    dbl("camera.x_min", [](DatasetConfig& c) -> double& { return c.camera.x_min; });
    dbl("camera.x_max", [](DatasetConfig& c) -> double& { return c.camera.x_max; });
    dbl("camera.y_min", [](DatasetConfig& c) -> double& { return c.camera.y_min; });
    dbl("camera.y_max", [](DatasetConfig& c) -> double& { return c.camera.y_max; });
    dbl("camera.z_min", [](DatasetConfig& c) -> double& { return c.camera.z_min; });
    dbl("camera.z_max", [](DatasetConfig& c) -> double& { return c.camera.z_max; });
    dbl("camera.focal_min", [](DatasetConfig& c) -> double& { return c.camera.focal_min; });
    dbl("camera.focal_max", [](DatasetConfig& c) -> double& { return c.camera.focal_max; });
    dbl("camera.roll_max_deg", [](DatasetConfig& c) -> double& { return c.camera.roll_max_deg; });
    dbl("camera.fixed_focal", [](DatasetConfig& c) -> double& { return c.camera.fixed_focal; });
    dbl("camera.min_coverage", [](DatasetConfig& c) -> double& { return c.camera.min_coverage; });
    integer("camera.max_attempts", [](DatasetConfig& c) -> int& { return c.camera.max_attempts; });
    integer("fake_lines.min", [](DatasetConfig& c) -> int& { return c.fake_line_count_range.lo; });
    integer("fake_lines.max", [](DatasetConfig& c) -> int& { return c.fake_line_count_range.hi; });
    integer("players.min", [](DatasetConfig& c) -> int& { return c.player_count_range.lo; });
    integer("players.max", [](DatasetConfig& c) -> int& { return c.player_count_range.hi; });
    dbl("audience.probability", [](DatasetConfig& c) -> double& { return c.audience_probability; });
    return m;
  }();
  return setters;
}

}  // namespace detail

/// Flat `key = value` document, `#` starts a comment. Unknown keys, repeated
/// keys and malformed lines are errors.
inline DatasetConfig parse_config(std::string_view text) {
  DatasetConfig cfg;
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  std::map<std::string, int> seen;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const std::string t = detail::trim(line);
    if (t.empty()) continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = detail::trim(std::string_view(t).substr(0, eq));
    const std::string value = detail::trim(std::string_view(t).substr(eq + 1));
    const auto& setters = detail::config_setters();
    const auto it = setters.find(key);
    if (it == setters.end()) throw ConfigError("line " + std::to_string(lineno) + ": unknown key '" + key + "'");
    if (seen.contains(key))
      throw ConfigError("line " + std::to_string(lineno) + ": key '" + key + "' repeated (first on line " +
                        std::to_string(seen[key]) + ")");
    seen[key] = lineno;
    it->second(cfg, key, value);
  }
  return cfg;
}

inline DatasetConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError(path.string(), "cannot open config");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

/// Config echo for the manifest header.
inline nlohmann::ordered_json config_to_json(const DatasetConfig& c) {
  const auto& f = c.field;
  const auto& cam = c.camera;
  return {{"variant", std::string(variant_name(c.variant))},
          {"flags", variant_flags(c.variant).letters()},
          {"sample_count", c.sample_count},
          {"master_seed", c.master_seed},
          {"resolution", {c.resolution.width, c.resolution.height}},
          {"field",
           {{"length", f.length},
            {"width", f.width},
            {"circle_radius", f.circle_radius},
            {"penalty_area_depth", f.penalty_area_depth},
            {"penalty_area_width", f.penalty_area_width},
            {"goal_area_depth", f.goal_area_depth},
            {"goal_area_width", f.goal_area_width},
            {"penalty_spot_distance", f.penalty_spot_distance},
            {"goal_width", f.goal_width},
            {"goal_height", f.goal_height},
            {"line_width", f.line_width}}},
          {"camera",
           {{"x", {cam.x_min, cam.x_max}},
            {"y", {cam.y_min, cam.y_max}},
            {"z", {cam.z_min, cam.z_max}},
            {"focal", {cam.focal_min, cam.focal_max}},
            {"roll_max_deg", cam.roll_max_deg},
            {"fixed_focal", cam.fixed_focal},
            {"min_coverage", cam.min_coverage},
            {"max_attempts", cam.max_attempts}}},
          {"fake_lines", {c.fake_line_count_range.lo, c.fake_line_count_range.hi}},
          {"players", {c.player_count_range.lo, c.player_count_range.hi}},
          {"audience_probability", c.audience_probability},
          {"emit_diagnostic_mask", c.emit_diagnostic_mask}};
}

/// Inverse of config_to_json, used when validating a dataset on disk.
template <typename Json>
DatasetConfig config_from_json(const Json& j) {
  DatasetConfig c;
  const auto v = parse_variant(j.at("variant").template get<std::string>());
  if (!v) throw ConfigError("manifest names an unknown variant");
  c.variant = *v;
  c.sample_count = j.at("sample_count").template get<int>();
  c.master_seed = j.at("master_seed").template get<std::uint64_t>();
  c.resolution = {j.at("resolution").at(0).template get<int>(), j.at("resolution").at(1).template get<int>()};
  const auto& f = j.at("field");
  c.field = {f.at("length").template get<double>(),
             f.at("width").template get<double>(),
             f.at("circle_radius").template get<double>(),
             f.at("penalty_area_depth").template get<double>(),
             f.at("penalty_area_width").template get<double>(),
             f.at("goal_area_depth").template get<double>(),
             f.at("goal_area_width").template get<double>(),
             f.at("penalty_spot_distance").template get<double>(),
             f.at("goal_width").template get<double>(),
             f.at("goal_height").template get<double>(),
             f.at("line_width").template get<double>()};
  const auto& cam = j.at("camera");
  c.camera.x_min = cam.at("x").at(0).template get<double>();
  c.camera.x_max = cam.at("x").at(1).template get<double>();
  c.camera.y_min = cam.at("y").at(0).template get<double>();
  c.camera.y_max = cam.at("y").at(1).template get<double>();
  c.camera.z_min = cam.at("z").at(0).template get<double>();
  c.camera.z_max = cam.at("z").at(1).template get<double>();
  c.camera.focal_min = cam.at("focal").at(0).template get<double>();
  c.camera.focal_max = cam.at("focal").at(1).template get<double>();
  c.camera.roll_max_deg = cam.at("roll_max_deg").template get<double>();
  c.camera.fixed_focal = cam.at("fixed_focal").template get<double>();
  c.camera.min_coverage = cam.at("min_coverage").template get<double>();
  c.camera.max_attempts = cam.at("max_attempts").template get<int>();
  c.fake_line_count_range = {j.at("fake_lines").at(0).template get<int>(), j.at("fake_lines").at(1).template get<int>()};
  c.player_count_range = {j.at("players").at(0).template get<int>(), j.at("players").at(1).template get<int>()};
  c.audience_probability = j.at("audience_probability").template get<double>();
  c.emit_diagnostic_mask = j.at("emit_diagnostic_mask").template get<bool>();
  return c;
}

}  // namespace fieldsynth
