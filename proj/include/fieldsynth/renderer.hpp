#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <vector>

#include "fieldsynth/annotation.hpp"
#include "fieldsynth/camera.hpp"
#include "fieldsynth/color.hpp"
#include "fieldsynth/errors.hpp"
#include "fieldsynth/field_geometry.hpp"
#include "fieldsynth/noise.hpp"
#include "fieldsynth/randomization.hpp"
#include "fieldsynth/raster.hpp"

namespace fieldsynth {

/// Line paint, linear light, before the lighting tint.
inline constexpr double kLineWhite = 0.9;
/// Width of the grass apron around the touchlines, meters.
inline constexpr double kGrassApron = 6.0;
inline constexpr double kMinStrokePx = 1.0;
inline constexpr double kMaxStrokePx = 12.0;

/// Projected run plus its stroke geometry.
struct LineStroke {
  std::uint8_t id = 0;  // class id, or kFakeLineId
  ProjectedRun run;
  std::vector<Capsule> capsules;
};

/// World line width projected at each segment's mean depth, clamped to
/// [1, 12] px.
inline std::vector<Capsule> run_capsules(const ProjectedRun& run, double line_width, double focal_px) {
  std::vector<Capsule> caps;
  caps.reserve(run.pixels.size());
  for (std::size_t k = 0; k + 1 < run.pixels.size(); ++k) {
    const double depth = 0.5 * (run.depths[k] + run.depths[k + 1]);
    const double w = std::clamp(line_width * focal_px / depth, kMinStrokePx, kMaxStrokePx);
    caps.push_back({run.pixels[k], run.pixels[k + 1], w / 2});
  }
  return caps;
}

/// World-space endpoints of the scene's fake lines.
inline std::vector<std::pair<Vec3, Vec3>> fake_line_endpoints(const SceneSpec& scene, const FieldModel& field) {
  std::vector<std::pair<Vec3, Vec3>> out;
  for (const auto& f : scene.fake_lines) out.emplace_back(perimeter_point(field, f.t0), perimeter_point(field, f.t1));
  return out;
}

/// Every visible stroke of the frame: fake lines first, then real classes in
/// ascending id, which is also the mask overwrite order.
inline std::vector<LineStroke> layout_strokes(const SceneSpec& scene, const FieldModel& field,
                                              const CameraParams& cam,
                                              const KeypointSpacing& spacing = {}) {
  std::vector<LineStroke> strokes;
  const CameraFrame frame(cam);
  const double lw = field.dims().line_width;
  for (const auto& [p0, p1] : fake_line_endpoints(scene, field)) {
    const double len = (p1 - p0).norm();
    const auto n = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(len / spacing.segment_m)));
    std::vector<Vec3> pts;
    for (std::size_t k = 0; k <= n; ++k) pts.push_back(k == n ? p1 : Vec3(p0 + (p1 - p0) * (double(k) / n)));
    for (auto& run : trace_visible_runs(frame, pts)) {
      auto caps = run_capsules(run, lw, cam.focal_px);
      strokes.push_back({kFakeLineId, std::move(run), std::move(caps)});
    }
  }
  for (auto& [c, runs] : trace_field_lines(field, cam, spacing))
    for (auto& run : runs) {
      auto caps = run_capsules(run, lw, cam.focal_px);
      strokes.push_back({class_id(c), std::move(run), std::move(caps)});
    }
  return strokes;
}

inline void check_render_inputs(const SceneSpec& scene, const CameraParams& cam) {
  if (!(scene.camera.resolution == cam.resolution))
    throw DimensionMismatch("scene camera resolution " + std::to_string(scene.camera.resolution.width) + "x" +
                            std::to_string(scene.camera.resolution.height) + " differs from render camera " +
                            std::to_string(cam.resolution.width) + "x" + std::to_string(cam.resolution.height));
  if (cam.resolution.width <= 0 || cam.resolution.height <= 0)
    throw DimensionMismatch("resolution must be positive");
}

struct RenderedMasks {
  Mask training;    // ids 0..26
  Mask diagnostic;  // ids 0..27
};

/// Geometry-only label maps sharing the image's strokes. Fake lines go to the
/// diagnostic layer only, underneath the real lines.
inline RenderedMasks render_masks_from(const std::vector<LineStroke>& strokes, const Resolution& res) {
  RenderedMasks out{Mask(res.width, res.height), Mask(res.width, res.height)};
  for (const auto& s : strokes) {
    stroke_mask(out.diagnostic, s.capsules, s.id);
    if (s.id != kFakeLineId) stroke_mask(out.training, s.capsules, s.id);
  }
  return out;
}

inline RenderedMasks render_masks(const SceneSpec& scene, const FieldModel& field, const CameraParams& cam) {
  check_render_inputs(scene, cam);
  return render_masks_from(layout_strokes(scene, field, cam), cam.resolution);
}

inline Mask render_mask(const SceneSpec& scene, const FieldModel& field, const CameraParams& cam) {
  return render_masks(scene, field, cam).training;
}

/// Upper bound of the grass luminance anywhere in the frame (linear light,
/// tint applied).
inline double max_grass_luminance(const SceneSpec& scene) {
  const auto& preset = kTexturePresets[static_cast<std::size_t>(std::clamp(scene.grass_texture, 0, 4))];
  return luminance(scene.base_grass_color * scene.lighting_tint) * (1.0 + preset.amplitude);
}

inline double min_grass_luminance(const SceneSpec& scene) {
  const auto& preset = kTexturePresets[static_cast<std::size_t>(std::clamp(scene.grass_texture, 0, 4))];
  return luminance(scene.base_grass_color * scene.lighting_tint) * (1.0 - preset.amplitude) *
         scene.stripe_pattern.contrast;
}

inline Rgb line_color(const SceneSpec& scene) { return Rgb{kLineWhite, kLineWhite, kLineWhite} * scene.lighting_tint; }

/// Luminance (linear) above which a pixel counts as dominated by line paint:
/// a quarter of the way from the brightest grass to the line color.
inline double stroke_threshold(const SceneSpec& scene) {
  const double g = max_grass_luminance(scene);
  return g + 0.25 * (luminance(line_color(scene)) - g);
}

inline bool is_stroke_pixel(const Image& img, int x, int y, double threshold) {
  const std::uint8_t* px = img.at(x, y);
  return luminance({decode_u8(px[0]), decode_u8(px[1]), decode_u8(px[2])}) >= threshold;
}

namespace detail {

inline void paint_background(LinearImage& img, const SceneSpec& scene, const FieldModel& field,
                             const CameraParams& cam) {
  const Mat3 r = world_from_camera(cam);
  const double f = cam.focal_px, cx = cam.principal_point.u, cy = cam.principal_point.v;
  const Vec3 c = cam.position;
  const double hl = field.half_length() + kGrassApron, hw = field.half_width() + kGrassApron;
  const auto& preset = kTexturePresets[static_cast<std::size_t>(std::clamp(scene.grass_texture, 0, 4))];
  const std::uint64_t texture_seed = 0x6A09E667F3BCC908ULL + static_cast<std::uint64_t>(scene.grass_texture);
  const double so = std::cos(scene.stripe_pattern.orientation), si = std::sin(scene.stripe_pattern.orientation);
  const double inv_period = 1.0 / scene.stripe_pattern.period;
  const Rgb grass = scene.base_grass_color;
  const Rgb tint = scene.lighting_tint;
  const std::uint64_t crowd_seed = scene.audience_texture_seed;
  const Vec3 du = r.col(0) / f;
  for (int v = 0; v < img.height; ++v) {
    // ray direction for pixel centre (0.5, v + 0.5), stepped along u
    Vec3 d = r * Vec3((0.5 - cx) / f, (v + 0.5 - cy) / f, 1.0);
    for (int u = 0; u < img.width; ++u, d += du) {
      float* px = img.at(static_cast<std::size_t>(v) * img.width + u);
      Rgb out;
      bool ground = false;
      if (d.z() < 0.0) {
        const double t = -c.z() / d.z();
        const double x = c.x() + t * d.x(), y = c.y() + t * d.y();
        if (std::abs(x) <= hl && std::abs(y) <= hw) {
          ground = true;
          const double phase = (x * so + y * si) * inv_period;
          const double stripe = phase - std::floor(phase) < 0.5 ? 1.0 : scene.stripe_pattern.contrast;
          out = grass * (stripe * texture_modulation(preset, x, y, texture_seed));
        }
      }
      if (!ground) {
        const double elevation = d.z() / d.norm();
        if (elevation > 0.18) {
          const double k = std::min(1.0, (elevation - 0.18) * 2.0);
          out = Rgb{0.45, 0.55, 0.7} * (1 - k) + Rgb{0.25, 0.38, 0.62} * k;
        } else if (scene.audience_on) {
          // crowd: 3x3 px cells of random colour over dark seating
          const double n = lattice_value(u / 3, v / 3, crowd_seed);
          const double m = lattice_value(u / 3 + 7919, v / 3, crowd_seed);
          const double o = lattice_value(u / 3, v / 3 + 104729, crowd_seed);
          const double dens = value_noise(u / 40.0, v / 40.0, crowd_seed ^ 0x55);
          out = dens > 0.35 ? Rgb{0.05 + 0.5 * n * n, 0.05 + 0.45 * m * m, 0.05 + 0.45 * o * o}
                            : Rgb{0.04, 0.04, 0.05};
        } else {
          const double n = value_noise(u / 25.0, v / 25.0, crowd_seed ^ 0xA5);
          out = Rgb{0.08, 0.08, 0.09} * (0.8 + 0.4 * n);
        }
      }
      out = out * tint;
      px[0] = static_cast<float>(out.r);
      px[1] = static_cast<float>(out.g);
      px[2] = static_cast<float>(out.b);
    }
  }
}

inline void paint_players(LinearImage& img, CoverageAccumulator& acc, const SceneSpec& scene,
                          const CameraParams& cam) {
  const CameraFrame frame(cam);
  std::vector<std::pair<double, const Player*>> order;
  for (const auto& p : scene.players) {
    const double z = frame.to_camera(p.position).z();
    if (z > cam.near_plane) order.emplace_back(z, &p);
  }
  std::sort(order.begin(), order.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
  const Rgb skin = from_display(205, 160, 130) * scene.lighting_tint;
  for (const auto& [z, p] : order) {
    const auto at = [&](double h) { return frame.project(p->position + Vec3(0, 0, h)); };
    const auto foot = at(0.05), hip = at(0.9), shoulder = at(1.45), head = at(1.7);
    if (!foot || !hip || !shoulder || !head) continue;
    const double scale = cam.focal_px / z;
    const Capsule legs[] = {{*foot, *hip, 0.12 * scale}};
    const Capsule torso[] = {{*hip, *shoulder, 0.2 * scale}};
    const Capsule face[] = {{*head, *head, 0.11 * scale}};
    stroke_linear(img, acc, legs, p->jersey * 0.35 * scene.lighting_tint);
    stroke_linear(img, acc, torso, p->jersey * scene.lighting_tint);
    stroke_linear(img, acc, face, skin);
  }
}

}  // namespace detail

/// Renders the color frame. Paint order: background and audience, textured
/// and striped grass, lighting tint, real lines, fake lines, players.
inline Image render_image_from(const SceneSpec& scene, const FieldModel& field, const CameraParams& cam,
                               const std::vector<LineStroke>& strokes) {
  LinearImage img(cam.resolution.width, cam.resolution.height);
  detail::paint_background(img, scene, field, cam);
  CoverageAccumulator acc(img.width, img.height);
  const Rgb paint = line_color(scene);
  for (const auto& s : strokes)
    if (s.id != kFakeLineId) stroke_linear(img, acc, s.capsules, paint);
  for (const auto& s : strokes)
    if (s.id == kFakeLineId) stroke_linear(img, acc, s.capsules, paint);
  detail::paint_players(img, acc, scene, cam);
  return img.encode();
}

inline Image render_image(const SceneSpec& scene, const FieldModel& field, const CameraParams& cam) {
  check_render_inputs(scene, cam);
  return render_image_from(scene, field, cam, layout_strokes(scene, field, cam));
}

}  // namespace fieldsynth
