#pragma once

#include <array>
#include <bit>
#include <initializer_list>
#include <optional>
#include <cstdint>
#include <numbers>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "fieldsynth/camera.hpp"
#include "fieldsynth/color.hpp"
#include "fieldsynth/errors.hpp"
#include "fieldsynth/field_geometry.hpp"
#include "fieldsynth/rng.hpp"

namespace fieldsynth {

/// Randomized scene elements: jersey, audience, green shades, ground pattern,
/// lighting tint, ground color, multiple cameras, fake lines.
enum class Flag : std::uint8_t { J, A, G, P, L, C, M, F };

inline constexpr std::array<Flag, 8> kAllFlags = {Flag::J, Flag::A, Flag::G, Flag::P,
                                                  Flag::L, Flag::C, Flag::M, Flag::F};

constexpr char flag_letter(Flag f) { return "JAGPLCMF"[static_cast<int>(f)]; }

class FlagSet {
public:
  constexpr FlagSet() = default;
  constexpr FlagSet(std::initializer_list<Flag> flags) {
    for (Flag f : flags) bits_ |= bit(f);
  }
  constexpr bool has(Flag f) const { return (bits_ & bit(f)) != 0; }
  constexpr FlagSet with(Flag f) const { return from_bits(bits_ | bit(f)); }
  constexpr FlagSet without(Flag f) const { return from_bits(bits_ & ~bit(f)); }
  constexpr std::uint8_t bits() const { return bits_; }
  constexpr std::size_t size() const { return static_cast<std::size_t>(std::popcount(bits_)); }
  /// Non-strict subset.
  constexpr bool subset_of(FlagSet o) const { return (bits_ & ~o.bits_) == 0; }
  constexpr bool strict_subset_of(FlagSet o) const { return subset_of(o) && bits_ != o.bits_; }
  friend constexpr bool operator==(FlagSet, FlagSet) = default;

  std::string letters() const {
    std::string s;
    for (Flag f : kAllFlags)
      if (has(f)) s += flag_letter(f);
    return s;
  }

  static constexpr FlagSet from_bits(std::uint8_t b) {
    FlagSet s;
    s.bits_ = b;
    return s;
  }

private:
  static constexpr std::uint8_t bit(Flag f) { return static_cast<std::uint8_t>(1u << static_cast<int>(f)); }
  std::uint8_t bits_ = 0;
};

enum class DatasetVariant : std::uint8_t { JA, JA_G, JA_G_P, JA_G_P_L, JA_G_P_L_CM, SOCCERSYNTH_FIELD };

inline constexpr std::array<DatasetVariant, 6> kAllVariants = {
    DatasetVariant::JA,       DatasetVariant::JA_G,        DatasetVariant::JA_G_P,
    DatasetVariant::JA_G_P_L, DatasetVariant::JA_G_P_L_CM, DatasetVariant::SOCCERSYNTH_FIELD};

inline constexpr std::array<std::string_view, 6> kVariantNames = {
    "JA", "JA_G", "JA_G_P", "JA_G_P_L", "JA_G_P_L_CM", "SOCCERSYNTH_FIELD"};

constexpr std::string_view variant_name(DatasetVariant v) { return kVariantNames[static_cast<int>(v)]; }

inline std::optional<DatasetVariant> parse_variant(std::string_view s) {
  for (std::size_t i = 0; i < kVariantNames.size(); ++i)
    if (kVariantNames[i] == s) return kAllVariants[i];
  // Accept the "+"-joined row labels too, e.g. "JA+G+P".
  std::string normalized(s);
  for (char& c : normalized)
    if (c == '+') c = '_';
  for (std::size_t i = 0; i < kVariantNames.size(); ++i)
    if (kVariantNames[i] == normalized) return kAllVariants[i];
  return std::nullopt;
}

constexpr FlagSet variant_flags(DatasetVariant v) {
  using enum Flag;
  switch (v) {
    case DatasetVariant::JA: return {J, A};
    case DatasetVariant::JA_G: return {J, A, G};
    case DatasetVariant::JA_G_P: return {J, A, G, P};
    case DatasetVariant::JA_G_P_L: return {J, A, G, P, L};
    case DatasetVariant::JA_G_P_L_CM: return {J, A, G, P, L, C, M};
    case DatasetVariant::SOCCERSYNTH_FIELD: return {J, A, G, P, L, C, M, F};
  }
  return {};
}

/// Mowing pattern. Bands alternate between full brightness and `contrast`
/// along direction (cos orientation, sin orientation); `period` spans one
/// light plus one dark band.
struct StripePattern {
  double orientation = 0.0;
  double period = 10.0;
  double contrast = 1.0;
  friend bool operator==(const StripePattern&, const StripePattern&) = default;
};

struct IntRange {
  int lo = 0;
  int hi = 0;
};

/// Hue/saturation/value window (display space) used for green shades.
struct GreenBand {
  double hue_min = 80.0, hue_max = 150.0;
  double sat_min = 0.35, sat_max = 0.75;
  double val_min = 0.30, val_max = 0.60;
};

inline constexpr int kTexturePresetCount = 5;

inline std::vector<Rgb> default_grass_palette() {
  // six greens, four yellow-greens
  return {from_display(59, 110, 42),  from_display(74, 127, 51),  from_display(47, 94, 37),
          from_display(86, 136, 58),  from_display(63, 122, 58),  from_display(102, 143, 60),
          from_display(124, 145, 64), from_display(142, 154, 74), from_display(163, 161, 87),
          from_display(156, 143, 78)};
}

inline std::vector<StripePattern> default_pattern_library() {
  const double quarter = std::numbers::pi / 2;
  return {{0.0, 10.0, 0.86},     {0.0, 11.0, 0.82},     {0.0, 13.125, 0.88},
          {quarter, 8.5, 0.86},  {quarter, 11.3, 0.84}, {0.0, 15.0, 0.9}};
}

struct RandomizationConfig {
  FlagSet flags;
  std::vector<Rgb> palette = default_grass_palette();
  Rgb default_grass = from_display(61, 115, 41);
  GreenBand green_band{};
  std::vector<StripePattern> pattern_library = default_pattern_library();
  Rgb white_tint{1.0, 1.0, 1.0};
  Rgb yellow_tint{1.0, 0.86, 0.62};
  IntRange fake_line_count_range{1, 4};
  IntRange player_count_range{14, 22};
  int fixed_player_count = 22;
  double audience_probability = 0.75;
  CameraRanges camera{};

  /// Throws ConfigError. Off-ladder flag sets are allowed for experiments, but
  /// C and M travel together and F needs every other flag.
  void validate() const {
    if (flags.has(Flag::C) != flags.has(Flag::M))
      throw ConfigError("flags C and M must be enabled together");
    if (flags.has(Flag::F) && flags != variant_flags(DatasetVariant::SOCCERSYNTH_FIELD))
      throw ConfigError("flag F requires all of JAGPLCM, got {" + flags.letters() + "}");
    if (palette.empty()) throw ConfigError("grass palette is empty");
    if (pattern_library.empty()) throw ConfigError("pattern library is empty");
    for (const auto& p : pattern_library)
      if (!(p.period > 0) || !(p.contrast > 0) || p.contrast > 1)
        throw ConfigError("pattern periods must be > 0 and contrast in (0, 1]");
    if (fake_line_count_range.lo < 0 || fake_line_count_range.hi < fake_line_count_range.lo)
      throw ConfigError("fake_line_count_range is empty or negative");
    if (player_count_range.lo < 0 || player_count_range.hi < player_count_range.lo)
      throw ConfigError("player_count_range is empty or negative");
    if (green_band.hue_min > green_band.hue_max) throw ConfigError("green band hue range inverted");
  }
};

inline RandomizationConfig variant_config(DatasetVariant v) {
  RandomizationConfig cfg;
  cfg.flags = variant_flags(v);
  return cfg;
}

struct Player {
  Vec3 position;
  Rgb jersey;
  int team = 0;
  friend bool operator==(const Player&, const Player&) = default;
};

struct FakeLine {
  double t0 = 0.0;
  double t1 = 0.0;
  friend bool operator==(const FakeLine&, const FakeLine&) = default;
};

/// One concrete sampled scene.
struct SceneSpec {
  std::uint64_t seed = 0;
  Rgb base_grass_color;
  StripePattern stripe_pattern;
  int grass_texture = 0;
  Rgb lighting_tint{1.0, 1.0, 1.0};
  CameraParams camera;
  std::vector<FakeLine> fake_lines;
  std::vector<Player> players;
  bool audience_on = false;
  std::uint64_t audience_texture_seed = 0;

  friend bool operator==(const SceneSpec&, const SceneSpec&) = default;
};

namespace detail {

/// Team color at least a fixed display-space distance from white, from every
/// configured grass color and from `other_team`.
inline Rgb sample_jersey(Rng& rng, const RandomizationConfig& config, const Rgb& other_team) {
  const Rgb white{1, 1, 1};
  for (int attempt = 0; attempt < 256; ++attempt) {
    const Rgb c = from_display(static_cast<int>(rng.uniform_int(0, 255)),
                               static_cast<int>(rng.uniform_int(0, 255)),
                               static_cast<int>(rng.uniform_int(0, 255)));
    bool ok = display_distance(c, white) >= 0.45 && display_distance(c, other_team) >= 0.3 &&
              display_distance(c, config.default_grass) >= 0.3;
    for (const Rgb& g : config.palette) ok = ok && display_distance(c, g) >= 0.3;
    if (ok) return c;
  }
  return from_display(180, 20, 30);
}

}  // namespace detail

/// Draws one scene. Every element reads from its own substream of `rng`, so
/// toggling a flag only changes the fields that flag controls.
inline SceneSpec sample_scene(const Rng& rng, const RandomizationConfig& config,
                              const FieldModel& field, Resolution res = {}) {
  config.validate();
  const FlagSet& flags = config.flags;
  SceneSpec scene;
  scene.seed = rng.seed();

  // G / C: grass color
  if (flags.has(Flag::C)) {
    Rng r = rng.substream("ground-color");
    scene.base_grass_color =
        config.palette[static_cast<std::size_t>(r.uniform_int(0, static_cast<std::int64_t>(config.palette.size()) - 1))];
  } else if (flags.has(Flag::G)) {
    Rng r = rng.substream("green");
    const GreenBand& b = config.green_band;
    scene.base_grass_color = from_hsv(r.uniform(b.hue_min, b.hue_max), r.uniform(b.sat_min, b.sat_max),
                                      r.uniform(b.val_min, b.val_max));
  } else {
    scene.base_grass_color = config.default_grass;
  }

  // P: mowing stripes and grass texture preset
  if (flags.has(Flag::P)) {
    Rng r = rng.substream("pattern");
    scene.stripe_pattern = config.pattern_library[static_cast<std::size_t>(
        r.uniform_int(0, static_cast<std::int64_t>(config.pattern_library.size()) - 1))];
    scene.grass_texture = static_cast<int>(r.uniform_int(0, kTexturePresetCount - 1));
  } else {
    scene.stripe_pattern = StripePattern{0.0, 10.0, 1.0};
    scene.grass_texture = 0;
  }

  // L: per-image binary white/yellow choice
  if (flags.has(Flag::L)) {
    Rng r = rng.substream("lighting");
    scene.lighting_tint = r.bernoulli(0.5) ? config.yellow_tint : config.white_tint;
  } else {
    scene.lighting_tint = config.white_tint;
  }

  // M: camera
  {
    Rng r = rng.substream("camera");
    scene.camera = sample_camera(
        r, flags.has(Flag::M) ? CameraPreset::MultiBroadcast : CameraPreset::FixedBroadcast, field, res,
        config.camera);
  }

  // F: fake lines between points on different sides of the boundary
  if (flags.has(Flag::F)) {
    Rng r = rng.substream("fake-lines");
    const auto n = r.uniform_int(config.fake_line_count_range.lo, config.fake_line_count_range.hi);
    for (std::int64_t i = 0; i < n; ++i) {
      const double t0 = r.uniform();
      double t1 = r.uniform();
      while (perimeter_side(field, t1) == perimeter_side(field, t0)) t1 = r.uniform();
      scene.fake_lines.push_back({t0, t1});
    }
  }

  // J: player count and jersey colors; positions always come from their own stream
  {
    Rng count_rng = rng.substream("player-count");
    const int count = flags.has(Flag::J)
                          ? static_cast<int>(count_rng.uniform_int(config.player_count_range.lo,
                                                                   config.player_count_range.hi))
                          : config.fixed_player_count;
    Rgb team_colors[2] = {from_display(200, 30, 40), from_display(30, 60, 170)};
    if (flags.has(Flag::J)) {
      Rng r = rng.substream("jerseys");
      team_colors[0] = detail::sample_jersey(r, config, Rgb{1, 1, 1});
      team_colors[1] = detail::sample_jersey(r, config, team_colors[0]);
    }
    Rng pos = rng.substream("player-positions");
    scene.players.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) {
      const Vec3 p(pos.uniform(-field.half_length(), field.half_length()),
                   pos.uniform(-field.half_width(), field.half_width()), 0.0);
      scene.players.push_back({p, team_colors[i % 2], i % 2});
    }
  }

  // A: audience presence and stand texture
  if (flags.has(Flag::A)) {
    Rng r = rng.substream("audience");
    scene.audience_on = r.bernoulli(config.audience_probability);
    scene.audience_texture_seed = r.next_u64();
  }
  return scene;
}

}  // namespace fieldsynth
