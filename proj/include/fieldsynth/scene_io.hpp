#pragma once

#include <cstdio>
#include <string>

#include <nlohmann/json.hpp>

#include "fieldsynth/camera.hpp"
#include "fieldsynth/errors.hpp"
#include "fieldsynth/randomization.hpp"

// JSON records for CameraParams and SceneSpec. Doubles round-trip exactly.

namespace fieldsynth {

inline nlohmann::ordered_json to_json(const Rgb& c) { return {c.r, c.g, c.b}; }
inline nlohmann::ordered_json to_json(const Vec3& v) { return {v.x(), v.y(), v.z()}; }

inline nlohmann::ordered_json to_json(const CameraParams& cam) {
  return {{"position", to_json(cam.position)},
          {"pan", cam.pan},
          {"tilt", cam.tilt},
          {"roll", cam.roll},
          {"focal_px", cam.focal_px},
          {"principal_point", {cam.principal_point.u, cam.principal_point.v}},
          {"resolution", {cam.resolution.width, cam.resolution.height}},
          {"near_plane", cam.near_plane}};
}

inline nlohmann::ordered_json to_json(const SceneSpec& s) {
  nlohmann::ordered_json fake = nlohmann::ordered_json::array();
  for (const auto& f : s.fake_lines) fake.push_back({f.t0, f.t1});
  nlohmann::ordered_json players = nlohmann::ordered_json::array();
  for (const auto& p : s.players)
    players.push_back({{"position", to_json(p.position)}, {"jersey", to_json(p.jersey)}, {"team", p.team}});
  return {{"seed", s.seed},
          {"base_grass_color", to_json(s.base_grass_color)},
          {"stripe_pattern",
           {{"orientation", s.stripe_pattern.orientation},
            {"period", s.stripe_pattern.period},
            {"contrast", s.stripe_pattern.contrast}}},
          {"grass_texture", s.grass_texture},
          {"lighting_tint", to_json(s.lighting_tint)},
          {"camera", to_json(s.camera)},
          {"fake_lines", std::move(fake)},
          {"players", std::move(players)},
          {"audience_on", s.audience_on},
          {"audience_texture_seed", s.audience_texture_seed}};
}

namespace detail {

template <typename Json>
Rgb rgb_from(const Json& j) {
  return {j.at(0).template get<double>(), j.at(1).template get<double>(), j.at(2).template get<double>()};
}

template <typename Json>
Vec3 vec3_from(const Json& j) {
  return {j.at(0).template get<double>(), j.at(1).template get<double>(), j.at(2).template get<double>()};
}

}  // namespace detail

template <typename Json>
CameraParams camera_from_json(const Json& j) {
  CameraParams cam;
  cam.position = detail::vec3_from(j.at("position"));
  cam.pan = j.at("pan").template get<double>();
  cam.tilt = j.at("tilt").template get<double>();
  cam.roll = j.at("roll").template get<double>();
  cam.focal_px = j.at("focal_px").template get<double>();
  cam.principal_point = {j.at("principal_point").at(0).template get<double>(),
                         j.at("principal_point").at(1).template get<double>()};
  cam.resolution = {j.at("resolution").at(0).template get<int>(), j.at("resolution").at(1).template get<int>()};
  cam.near_plane = j.at("near_plane").template get<double>();
  return cam;
}

inline SceneSpec scene_from_json(const nlohmann::json& j) {
  try {
    SceneSpec s;
    s.seed = j.at("seed").get<std::uint64_t>();
    s.base_grass_color = detail::rgb_from(j.at("base_grass_color"));
    const auto& sp = j.at("stripe_pattern");
    s.stripe_pattern = {sp.at("orientation").get<double>(), sp.at("period").get<double>(),
                        sp.at("contrast").get<double>()};
    s.grass_texture = j.at("grass_texture").get<int>();
    s.lighting_tint = detail::rgb_from(j.at("lighting_tint"));
    s.camera = camera_from_json(j.at("camera"));
    for (const auto& f : j.at("fake_lines")) s.fake_lines.push_back({f.at(0).get<double>(), f.at(1).get<double>()});
    for (const auto& p : j.at("players"))
      s.players.push_back({detail::vec3_from(p.at("position")), detail::rgb_from(p.at("jersey")), p.at("team").get<int>()});
    s.audience_on = j.at("audience_on").get<bool>();
    s.audience_texture_seed = j.at("audience_texture_seed").get<std::uint64_t>();
    return s;
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("scene record: ") + e.what());
  }
}

inline std::string emit_scene(const SceneSpec& s) { return to_json(s).dump(2) + "\n"; }

inline SceneSpec parse_scene(const std::string& text) {
  try {
    return scene_from_json(nlohmann::json::parse(text));
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(std::string("scene record: ") + e.what());
  }
}

/// Short stable digest of the camera record (FNV-1a over its JSON).
inline std::string camera_digest(const CameraParams& cam) {
  const std::uint64_t h = fnv1a(to_json(cam).dump());
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace fieldsynth
