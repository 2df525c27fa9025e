#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <set>

#include "fieldsynth/renderer.hpp"

using namespace fieldsynth;

namespace {

const FieldModel& field() {
  static const FieldModel m = build_field_model();
  return m;
}

SceneSpec scene_for(FlagSet flags, std::uint64_t seed) {
  RandomizationConfig cfg;
  cfg.flags = flags;
  return sample_scene(Rng(seed), cfg, field());
}

SceneSpec plain_scene() {
  SceneSpec s = scene_for({}, 1);
  s.players.clear();
  return s;
}

bool ray_hits_pitch(const CameraParams& cam, int u, int v) {
  const Vec3 d = world_from_camera(cam) * Vec3((u + 0.5 - cam.principal_point.u) / cam.focal_px,
                                               (v + 0.5 - cam.principal_point.v) / cam.focal_px, 1.0);
  if (d.z() >= 0) return false;
  const double t = -cam.position.z() / d.z();
  const Vec3 g = cam.position + t * d;
  return std::abs(g.x()) < 52.5 && std::abs(g.y()) < 34;
}

}  // namespace

TEST(RenderImage, MiddleLineIsWhite) {
  const SceneSpec s = plain_scene();
  const Image img = render_image(s, field(), s.camera);
  ASSERT_EQ(img.width, 1920);
  ASSERT_EQ(img.height, 1080);
  int checked = 0;
  for (const Vec3& p : sample_primitive_points(field(), LineClass::MiddleLine, 0.5)) {
    // keep clear of the centre-circle crossings and the touchlines
    if (std::abs(std::abs(p.y()) - 9.15) < 0.5 || std::abs(p.y()) > 33) continue;
    const auto q = project_point(s.camera, p);
    ASSERT_TRUE(q);
    if (q->u < 0 || q->v < 0 || q->u >= img.width || q->v >= img.height) continue;
    const auto* px = img.at(static_cast<int>(q->u), static_cast<int>(q->v));
    EXPECT_GE(std::min({px[0], px[1], px[2]}), 200) << p.transpose();
    ++checked;
  }
  EXPECT_GT(checked, 100);
}

TEST(RenderImage, Deterministic) {
  const SceneSpec s = scene_for(variant_flags(DatasetVariant::SOCCERSYNTH_FIELD), 9);
  EXPECT_EQ(render_image(s, field(), s.camera), render_image(s, field(), s.camera));
  EXPECT_EQ(render_mask(s, field(), s.camera), render_mask(s, field(), s.camera));
}

TEST(RenderImage, TintRatioOnGrass) {
  SceneSpec white = scene_for(variant_flags(DatasetVariant::JA_G_P), 4);
  white.players.clear();
  RandomizationConfig cfg;
  SceneSpec yellow = white;
  yellow.lighting_tint = cfg.yellow_tint;
  const Image a = render_image(white, field(), white.camera);
  const Image b = render_image(yellow, field(), yellow.camera);
  const Mask m = render_mask(white, field(), white.camera);
  double sa[3] = {}, sb[3] = {};
  for (int v = 0; v < a.height; v += 2)
    for (int u = 0; u < a.width; u += 2) {
      if (!ray_hits_pitch(white.camera, u, v)) continue;
      bool near_line = false;
      for (int dv = -3; dv <= 3 && !near_line; ++dv)
        for (int du = -3; du <= 3 && !near_line; ++du) {
          const int x = u + du, y = v + dv;
          near_line = x >= 0 && y >= 0 && x < a.width && y < a.height && m.at(x, y) != 0;
        }
      if (near_line) continue;
      for (int c = 0; c < 3; ++c) {
        sa[c] += decode_u8(a.at(u, v)[c]);
        sb[c] += decode_u8(b.at(u, v)[c]);
      }
    }
  const double tint[3] = {cfg.yellow_tint.r, cfg.yellow_tint.g, cfg.yellow_tint.b};
  for (int c = 0; c < 3; ++c) EXPECT_NEAR(sb[c] / sa[c], tint[c], 0.02 * tint[c]) << "channel " << c;
}

TEST(RenderImage, LineOutshinesGrass) {
  for (auto v : kAllVariants)
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
      RandomizationConfig cfg = variant_config(v);
      // skip the camera for speed: colours do not depend on it
      cfg.flags = cfg.flags.without(Flag::M).without(Flag::C).without(Flag::F);
      const SceneSpec s = sample_scene(Rng(seed), cfg, field());
      EXPECT_GE(luminance(line_color(s)), 1.5 * max_grass_luminance(s));
    }
  RandomizationConfig cfg;
  for (const Rgb& g : cfg.palette)
    for (const Rgb& t : {cfg.white_tint, cfg.yellow_tint}) {
      SceneSpec s;
      s.base_grass_color = g;
      s.lighting_tint = t;
      for (int k = 0; k < kTexturePresetCount; ++k) {
        s.grass_texture = k;
        EXPECT_GE(luminance(line_color(s)), 1.5 * max_grass_luminance(s));
      }
    }
}

TEST(RenderImage, ResolutionMismatchThrows) {
  const SceneSpec s = plain_scene();
  CameraParams cam = s.camera;
  cam.resolution = {640, 360};
  EXPECT_THROW(render_image(s, field(), cam), DimensionMismatch);
  EXPECT_THROW(render_mask(s, field(), cam), DimensionMismatch);
}

TEST(RenderMask, VisibleClassesPresentAndNoFakeId) {
  const SceneSpec s = plain_scene();
  const Mask m = render_mask(s, field(), s.camera);
  std::set<int> ids(m.labels.begin(), m.labels.end());
  EXPECT_FALSE(ids.contains(kFakeLineId));
  const CameraFrame frame(s.camera);
  for (auto c : all_line_classes()) {
    bool visible = false;
    for (const Vec3& p : sample_primitive_points(field(), c, 0.05)) {
      const auto q = frame.project(p);
      visible = visible || (q && q->u > 2 && q->v > 2 && q->u < 1918 && q->v < 1078);
    }
    EXPECT_EQ(ids.contains(class_id(c)), visible) << name_of(c);
  }
}

TEST(RenderMask, PixelsSitOnImageStrokes) {
  for (std::uint64_t seed : {2u, 3u, 5u}) {
    SceneSpec s = scene_for(variant_flags(DatasetVariant::SOCCERSYNTH_FIELD), seed);
    s.players.clear();
    const Image img = render_image(s, field(), s.camera);
    const auto masks = render_masks(s, field(), s.camera);
    const double thr = stroke_threshold(s);
    std::size_t total = 0, ok = 0;
    for (int y = 0; y < img.height; ++y)
      for (int x = 0; x < img.width; ++x) {
        if (masks.diagnostic.at(x, y) == 0) continue;
        ++total;
        bool hit = false;
        for (int dy = -1; dy <= 1 && !hit; ++dy)
          for (int dx = -1; dx <= 1 && !hit; ++dx) {
            const int i = x + dx, j = y + dy;
            hit = i >= 0 && j >= 0 && i < img.width && j < img.height && is_stroke_pixel(img, i, j, thr);
          }
        ok += hit;
      }
    ASSERT_GT(total, 1000u);
    EXPECT_EQ(ok, total) << "seed " << seed;
  }
}

TEST(RenderMask, FakeLinesOnlyInDiagnosticLayer) {
  int with_fake = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const SceneSpec s = scene_for(variant_flags(DatasetVariant::SOCCERSYNTH_FIELD), seed);
    const auto masks = render_masks(s, field(), s.camera);
    for (std::size_t i = 0; i < masks.training.labels.size(); ++i) {
      ASSERT_LE(masks.training.labels[i], kLineClassCount);
      // real lines win every overlap in both layers
      if (masks.training.labels[i] != 0) ASSERT_EQ(masks.diagnostic.labels[i], masks.training.labels[i]);
    }
    with_fake += std::count(masks.diagnostic.labels.begin(), masks.diagnostic.labels.end(), kFakeLineId) > 0;
  }
  EXPECT_GT(with_fake, 10);
}

TEST(RenderMask, HigherIdWinsOverlap) {
  const SceneSpec s = plain_scene();
  const auto strokes = layout_strokes(s, field(), s.camera);
  const Mask m = render_masks_from(strokes, s.camera.resolution).training;
  // redraw by brute force: last writer in ascending id order
  Mask ref(m.width, m.height);
  for (int id = 1; id <= static_cast<int>(kLineClassCount); ++id)
    for (const auto& st : strokes)
      if (st.id == id) stroke_mask(ref, st.capsules, static_cast<std::uint8_t>(id));
  EXPECT_EQ(m, ref);
}

TEST(RenderMask, SkyCameraGivesEmptyMask) {
  SceneSpec s = plain_scene();
  s.camera.tilt = -0.8;
  const Mask m = render_mask(s, field(), s.camera);
  EXPECT_TRUE(std::all_of(m.labels.begin(), m.labels.end(), [](auto l) { return l == 0; }));
}

TEST(RenderMask, StrokeWidthClamped) {
  const SceneSpec s = scene_for(variant_flags(DatasetVariant::JA_G_P_L_CM), 12);
  for (const auto& st : layout_strokes(s, field(), s.camera))
    for (const auto& c : st.capsules) {
      EXPECT_GE(2 * c.radius, kMinStrokePx);
      EXPECT_LE(2 * c.radius, kMaxStrokePx);
    }
}

TEST(RenderImage, StripePeriodFromSpectrum) {
  // top-down camera, 20 px per meter, 2000 px wide: a 10 m period is bin 10
  const Resolution res{2000, 400};
  SceneSpec s = plain_scene();
  s.camera.resolution = res;
  s.stripe_pattern = {0.0, 10.0, 0.8};
  s.grass_texture = 1;
  s.camera.position = Vec3(0.3, 0.0, 50.0);
  s.camera.pan = 0;
  s.camera.tilt = std::numbers::pi / 2;
  s.camera.roll = 0;
  s.camera.focal_px = 1000;
  s.camera.principal_point = {1000, 200};
  const Image img = render_image(s, field(), s.camera);
  const int row = 77;  // y = 6.15 m: clear of the circle and the box lines
  const int n = img.width;
  std::vector<double> lum(n);
  double mean = 0;
  for (int u = 0; u < n; ++u) {
    const auto* px = img.at(u, row);
    mean += lum[u] = luminance({decode_u8(px[0]), decode_u8(px[1]), decode_u8(px[2])});
  }
  mean /= n;
  int best = 0;
  double best_power = -1;
  for (int k = 1; k < n / 2; ++k) {
    std::complex<double> acc = 0;
    for (int u = 0; u < n; ++u) acc += (lum[u] - mean) * std::polar(1.0, -2 * std::numbers::pi * k * u / n);
    if (std::norm(acc) > best_power) best_power = std::norm(acc), best = k;
  }
  EXPECT_NEAR(best, 10, 1);
}
