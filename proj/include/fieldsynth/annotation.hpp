#pragma once

#include <algorithm>
#include <cmath>
#include <iostream>
#include <map>
#include <numbers>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "fieldsynth/camera.hpp"
#include "fieldsynth/errors.hpp"
#include "fieldsynth/field_geometry.hpp"
#include "fieldsynth/line_class.hpp"

namespace fieldsynth {

/// Image point normalized by the frame size: x = u / width, y = v / height.
struct NormalizedPoint {
  double x = 0.0;
  double y = 0.0;
  friend bool operator==(const NormalizedPoint&, const NormalizedPoint&) = default;
};

/// Ground truth for one frame: visible classes only, each with its points in
/// primitive order. Iteration follows the canonical class order.
struct AnnotationDocument {
  std::map<LineClass, std::vector<NormalizedPoint>> lines;

  bool contains(LineClass c) const { return lines.contains(c); }
  std::size_t point_count() const {
    std::size_t n = 0;
    for (const auto& [c, pts] : lines) n += pts.size();
    return n;
  }
  friend bool operator==(const AnnotationDocument&, const AnnotationDocument&) = default;
};

/// Keypoint spacing along primitives: meters on straight lines, degrees of
/// sweep on arcs.
struct KeypointSpacing {
  double segment_m = 1.0;
  double arc_deg = 5.0;
};

/// Maximal visible stretch of a sampled primitive, in pixels, with the camera
/// depth of every vertex.
struct ProjectedRun {
  std::vector<PixelPoint> pixels;
  std::vector<double> depths;
};

/// Clips every consecutive pair of `points` to the frame and chains the
/// surviving pieces into maximal runs. Vertices strictly inside the frame are
/// kept as is; border crossings add the exact crossing point.
inline std::vector<ProjectedRun> trace_visible_runs(const CameraFrame& frame,
                                                    std::span<const Vec3> points) {
  std::vector<ProjectedRun> runs;
  ProjectedRun current;
  const auto& cam = frame.params();
  const double w = cam.resolution.width, h = cam.resolution.height;
  const auto push = [&](const Vec3& p) {
    const Vec3 pc = frame.to_camera(p);
    PixelPoint q = frame.divide(pc);
    q.u = std::clamp(q.u, 0.0, w);
    q.v = std::clamp(q.v, 0.0, h);
    current.pixels.push_back(q);
    current.depths.push_back(pc.z());
  };
  const auto close = [&] {
    if (current.pixels.size() >= 2) runs.push_back(std::move(current));
    current = {};
  };
  bool open = false;  // the last piece ended exactly on its segment's end vertex
  for (std::size_t k = 0; k + 1 < points.size(); ++k) {
    const Vec3& a = points[k];
    const Vec3& b = points[k + 1];
    const auto params = clip_segment_params(frame, a, b);
    if (!params) {
      close();
      open = false;
      continue;
    }
    const auto [s0, s1] = *params;
    const Vec3 pa = s0 <= 0.0 ? a : Vec3(a + s0 * (b - a));
    const Vec3 pb = s1 >= 1.0 ? b : Vec3(a + s1 * (b - a));
    const PixelPoint qa = frame.divide(frame.to_camera(pa));
    const PixelPoint qb = frame.divide(frame.to_camera(pb));
    if (std::hypot(qb.u - qa.u, qb.v - qa.v) < 1e-9) {
      // grazes a corner; nothing visible
      close();
      open = false;
      continue;
    }
    if (!(open && s0 <= 0.0)) {
      close();
      push(pa);
    }
    push(pb);
    open = s1 >= 1.0;
    if (!open) close();
  }
  close();
  return runs;
}

inline double sampling_step(const FieldPrimitive& prim, const KeypointSpacing& spacing) {
  if (const auto* arc = std::get_if<Arc>(&prim.shape))
    return arc->radius * spacing.arc_deg * std::numbers::pi / 180.0;
  return spacing.segment_m;
}

/// Visible runs for every class.
inline std::map<LineClass, std::vector<ProjectedRun>> trace_field_lines(
    const FieldModel& field, const CameraParams& cam, const KeypointSpacing& spacing = {}) {
  if (!(spacing.segment_m > 0) || !(spacing.arc_deg > 0))
    throw std::invalid_argument("keypoint spacing must be > 0");
  const CameraFrame frame(cam);
  std::map<LineClass, std::vector<ProjectedRun>> out;
  for (const FieldPrimitive& prim : field.primitives()) {
    const auto pts = sample_primitive_points(field, prim.line_class, sampling_step(prim, spacing));
    auto runs = trace_visible_runs(frame, pts);
    if (!runs.empty()) out.emplace(prim.line_class, std::move(runs));
  }
  return out;
}

inline std::vector<NormalizedPoint> normalize_runs(std::span<const ProjectedRun> runs,
                                                   const Resolution& res) {
  std::vector<NormalizedPoint> pts;
  for (const auto& run : runs)
    for (const auto& q : run.pixels)
      pts.push_back({std::clamp(q.u / res.width, 0.0, 1.0), std::clamp(q.v / res.height, 0.0, 1.0)});
  return pts;
}

/// Keypoint-instance annotation: sample named points along each primitive,
/// clip to the frame, project, and concatenate visible runs per class.
inline AnnotationDocument generate_keypoints(const FieldModel& field, const CameraParams& cam,
                                             const KeypointSpacing& spacing = {}) {
  AnnotationDocument doc;
  for (const auto& [c, runs] : trace_field_lines(field, cam, spacing))
    doc.lines.emplace(c, normalize_runs(runs, cam.resolution));
  return doc;
}

/// Same spacing in meters for straight lines and arcs.
inline AnnotationDocument generate_keypoints(const FieldModel& field, const CameraParams& cam,
                                             double spacing_m) {
  if (!(spacing_m > 0)) throw std::invalid_argument("spacing must be > 0");
  AnnotationDocument doc;
  const CameraFrame frame(cam);
  for (const FieldPrimitive& prim : field.primitives()) {
    const auto pts = sample_primitive_points(field, prim.line_class, spacing_m);
    const auto runs = trace_visible_runs(frame, pts);
    if (!runs.empty()) doc.lines.emplace(prim.line_class, normalize_runs(runs, cam.resolution));
  }
  return doc;
}

/// Serializes as one JSON object: class name -> [{"x":..,"y":..}, ...], keys in
/// canonical class order. Doubles are written with round-trip precision.
inline std::string emit_annotation(const AnnotationDocument& doc) {
  nlohmann::ordered_json j = nlohmann::ordered_json::object();
  for (const auto& [c, pts] : doc.lines) {
    auto arr = nlohmann::ordered_json::array();
    for (const auto& p : pts) arr.push_back({{"x", p.x}, {"y", p.y}});
    j[std::string(name_of(c))] = std::move(arr);
  }
  return j.dump();
}

struct ParseOptions {
  /// Drop unknown class names (logged) instead of failing.
  bool lenient = false;
  std::ostream* log = &std::clog;
};

inline AnnotationDocument parse_annotation(std::string_view data, const ParseOptions& options = {}) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(data);
  } catch (const nlohmann::json::parse_error& e) {
    throw MalformedDocument("byte " + std::to_string(e.byte), e.what());
  }
  if (!j.is_object()) throw MalformedDocument("root", "expected a JSON object");
  AnnotationDocument doc;
  for (const auto& [key, value] : j.items()) {
    const auto c = class_from_name(key);
    if (!c) {
      if (!options.lenient) throw UnknownClass(key);
      if (options.log) *options.log << "annotation: dropping unknown class \"" << key << "\"\n";
      continue;
    }
    const std::string where = "\"" + key + "\"";
    if (!value.is_array()) throw MalformedDocument(where, "expected an array of points");
    if (value.size() < 2) throw MalformedDocument(where, "needs at least 2 points");
    std::vector<NormalizedPoint> pts;
    pts.reserve(value.size());
    for (std::size_t i = 0; i < value.size(); ++i) {
      const auto& p = value[i];
      const std::string at = where + "[" + std::to_string(i) + "]";
      if (!p.is_object() || !p.contains("x") || !p.contains("y") || !p["x"].is_number() ||
          !p["y"].is_number())
        throw MalformedDocument(at, "expected {\"x\": number, \"y\": number}");
      const double x = p["x"].get<double>(), y = p["y"].get<double>();
      if (!(x >= 0.0 && x <= 1.0)) throw CoordinateOutOfRange(key, i, x);
      if (!(y >= 0.0 && y <= 1.0)) throw CoordinateOutOfRange(key, i, y);
      pts.push_back({x, y});
    }
    doc.lines.emplace(*c, std::move(pts));
  }
  return doc;
}

/// Drops classes that do not occupy any pixel of `present` (indexed by class
/// id). Used so the document and the rasterized mask describe the same set.
inline void restrict_to_classes(AnnotationDocument& doc, const std::array<bool, kLineClassCount + 1>& present) {
  std::erase_if(doc.lines, [&](const auto& kv) { return !present[class_id(kv.first)]; });
}

}  // namespace fieldsynth
