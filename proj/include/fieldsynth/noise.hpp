#pragma once

#include <array>
#include <cmath>
#include <cstdint>

#include "fieldsynth/rng.hpp"

namespace fieldsynth {

inline double lattice_value(std::int64_t ix, std::int64_t iy, std::uint64_t seed) {
  const std::uint64_t h = mix64(seed ^ mix64(static_cast<std::uint64_t>(ix) * 0x9E3779B97F4A7C15ULL +
                                             static_cast<std::uint64_t>(iy)));
  return static_cast<double>(h >> 11) * 0x1.0p-53;
}

/// Smooth value noise in [0, 1).
inline double value_noise(double x, double y, std::uint64_t seed) {
  const double fx = std::floor(x), fy = std::floor(y);
  const auto ix = static_cast<std::int64_t>(fx), iy = static_cast<std::int64_t>(fy);
  const double tx = x - fx, ty = y - fy;
  const double sx = tx * tx * (3 - 2 * tx), sy = ty * ty * (3 - 2 * ty);
  const double v00 = lattice_value(ix, iy, seed), v10 = lattice_value(ix + 1, iy, seed);
  const double v01 = lattice_value(ix, iy + 1, seed), v11 = lattice_value(ix + 1, iy + 1, seed);
  const double a = v00 + sx * (v10 - v00);
  const double b = v01 + sx * (v11 - v01);
  return a + sy * (b - a);
}

/// Grass texture as fractal value noise. Modulation lies in
/// [1 - amplitude, 1 + amplitude].
struct TexturePreset {
  double base_frequency;  // cycles per meter
  int octaves;
  double amplitude;
};

inline constexpr std::array<TexturePreset, 5> kTexturePresets = {{
    {0.35, 2, 0.07},
    {0.80, 3, 0.10},
    {0.20, 2, 0.12},
    {1.60, 2, 0.08},
    {0.50, 3, 0.05},
}};

inline double texture_modulation(const TexturePreset& preset, double x, double y, std::uint64_t seed) {
  double sum = 0.0, norm = 0.0, amp = 1.0, freq = preset.base_frequency;
  for (int o = 0; o < preset.octaves; ++o) {
    sum += amp * value_noise(x * freq, y * freq, seed + static_cast<std::uint64_t>(o));
    norm += amp;
    amp *= 0.5;
    freq *= 2.0;
  }
  return 1.0 + preset.amplitude * (2.0 * sum / norm - 1.0);
}

}  // namespace fieldsynth
