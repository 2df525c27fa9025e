#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>

namespace fieldsynth {

/// Linear-light RGB triple.
struct Rgb {
  double r = 0.0, g = 0.0, b = 0.0;

  Rgb operator*(const Rgb& o) const { return {r * o.r, g * o.g, b * o.b}; }
  Rgb operator*(double s) const { return {r * s, g * s, b * s}; }
  Rgb operator+(const Rgb& o) const { return {r + o.r, g + o.g, b + o.b}; }
  friend bool operator==(const Rgb&, const Rgb&) = default;
};

inline constexpr double kGamma = 2.2;

inline double luminance(const Rgb& c) { return 0.2126 * c.r + 0.7152 * c.g + 0.0722 * c.b; }

inline double decode_gamma(double encoded) { return std::pow(std::clamp(encoded, 0.0, 1.0), kGamma); }
inline double encode_gamma(double linear) {
  return std::pow(std::clamp(linear, 0.0, 1.0), 1.0 / kGamma);
}

/// Display-space (gamma-encoded) 0..255 triple to linear light.
inline Rgb from_display(int r, int g, int b) {
  return {decode_gamma(r / 255.0), decode_gamma(g / 255.0), decode_gamma(b / 255.0)};
}

inline Rgb from_hsv(double hue_deg, double sat, double val) {
  const double c = val * sat;
  const double hp = std::fmod(hue_deg, 360.0) / 60.0;
  const double x = c * (1 - std::abs(std::fmod(hp, 2.0) - 1));
  double r = 0, g = 0, b = 0;
  if (hp < 1) r = c, g = x;
  else if (hp < 2) r = x, g = c;
  else if (hp < 3) g = c, b = x;
  else if (hp < 4) g = x, b = c;
  else if (hp < 5) r = x, b = c;
  else r = c, b = x;
  const double m = val - c;
  return {decode_gamma(r + m), decode_gamma(g + m), decode_gamma(b + m)};
}

/// Hue in degrees of the display-encoded version of a linear color.
inline double hue_deg(const Rgb& linear) {
  const double r = encode_gamma(linear.r), g = encode_gamma(linear.g), b = encode_gamma(linear.b);
  const double mx = std::max({r, g, b}), mn = std::min({r, g, b});
  const double d = mx - mn;
  if (d <= 0) return 0.0;
  double h;
  if (mx == r) h = std::fmod((g - b) / d, 6.0);
  else if (mx == g) h = (b - r) / d + 2;
  else h = (r - g) / d + 4;
  h *= 60.0;
  return h < 0 ? h + 360.0 : h;
}

/// Distance between two colors in display space; a cheap stand-in for a
/// perceptual difference.
inline double display_distance(const Rgb& a, const Rgb& b) {
  const double dr = encode_gamma(a.r) - encode_gamma(b.r);
  const double dg = encode_gamma(a.g) - encode_gamma(b.g);
  const double db = encode_gamma(a.b) - encode_gamma(b.b);
  return std::sqrt(dr * dr + dg * dg + db * db);
}

/// Linear [0,1] to 8-bit gamma-encoded, rounded to the nearest code. A coarse
/// table gives the first candidate code and the exact decision thresholds
/// finish the job, which keeps the dark end (many codes per bucket) exact.
class GammaEncoder {
public:
  static constexpr int kSize = 4096;

  GammaEncoder() {
    for (int c = 0; c < 255; ++c) threshold_[c] = decode_gamma((c + 0.5) / 255.0);
    threshold_[255] = 2.0;
    int code = 0;
    for (int i = 0; i < kSize; ++i) {
      const double x = static_cast<double>(i) / (kSize - 1);
      while (code < 255 && x >= threshold_[code]) ++code;
      table_[i] = static_cast<std::uint8_t>(code);
    }
  }

  std::uint8_t operator()(double linear) const {
    const double x = std::clamp(linear, 0.0, 1.0);
    int code = table_[static_cast<int>(x * (kSize - 1))];
    while (x >= threshold_[code]) ++code;
    return static_cast<std::uint8_t>(code);
  }

  static const GammaEncoder& instance() {
    static const GammaEncoder encoder;
    return encoder;
  }

private:
  std::array<std::uint8_t, kSize> table_{};
  std::array<double, 256> threshold_{};
};

/// 8-bit gamma-encoded to linear.
inline double decode_u8(std::uint8_t v) {
  static const auto table = [] {
    std::array<double, 256> t{};
    for (int i = 0; i < 256; ++i) t[i] = decode_gamma(i / 255.0);
    return t;
  }();
  return table[v];
}

}  // namespace fieldsynth
