#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "fieldsynth/camera.hpp"
#include "fieldsynth/color.hpp"
#include "fieldsynth/errors.hpp"

namespace fieldsynth {

/// 8-bit gamma-encoded RGB, row-major.
struct Image {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> pixels;

  Image() = default;
  Image(int w, int h, std::uint8_t fill = 0)
      : width(w), height(h), pixels(static_cast<std::size_t>(w) * h * 3, fill) {}

  std::uint8_t* at(int x, int y) { return &pixels[(static_cast<std::size_t>(y) * width + x) * 3]; }
  const std::uint8_t* at(int x, int y) const {
    return &pixels[(static_cast<std::size_t>(y) * width + x) * 3];
  }
  friend bool operator==(const Image&, const Image&) = default;
};

/// Per-pixel class ids: 0 background, 1..26 line classes, 27 fake line.
struct Mask {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> labels;

  Mask() = default;
  Mask(int w, int h) : width(w), height(h), labels(static_cast<std::size_t>(w) * h, 0) {}

  std::uint8_t& at(int x, int y) { return labels[static_cast<std::size_t>(y) * width + x]; }
  std::uint8_t at(int x, int y) const { return labels[static_cast<std::size_t>(y) * width + x]; }
  friend bool operator==(const Mask&, const Mask&) = default;
};

/// Linear-light float RGB working buffer.
struct LinearImage {
  int width = 0;
  int height = 0;
  std::vector<float> rgb;

  LinearImage(int w, int h) : width(w), height(h), rgb(static_cast<std::size_t>(w) * h * 3, 0.0f) {}

  float* at(std::size_t index) { return &rgb[index * 3]; }

  Image encode() const {
    Image out(width, height);
    const auto& enc = GammaEncoder::instance();
    for (std::size_t i = 0; i < rgb.size(); ++i) out.pixels[i] = enc(rgb[i]);
    return out;
  }
};

/// Round-capped capsule from a to b; radius in pixels.
struct Capsule {
  PixelPoint a;
  PixelPoint b;
  double radius = 0.5;
};

inline double distance_to_capsule_axis(const Capsule& c, double x, double y) {
  const double dx = c.b.u - c.a.u, dy = c.b.v - c.a.v;
  const double len2 = dx * dx + dy * dy;
  double t = 0.0;
  if (len2 > 0.0) t = std::clamp(((x - c.a.u) * dx + (y - c.a.v) * dy) / len2, 0.0, 1.0);
  return std::hypot(c.a.u + t * dx - x, c.a.v + t * dy - y);
}

/// Visits every pixel whose centre lies within `reach` of the capsule axis,
/// passing (pixel index, distance). Rows are bounded by the axis sub-segment
/// inside the row's vertical reach, so cost tracks the stroke area rather
/// than its bounding box.
template <typename Visit>
void scan_capsule(const Capsule& c, double reach, int width, int height, Visit&& visit) {
  const double ymin = std::min(c.a.v, c.b.v) - reach;
  const double ymax = std::max(c.a.v, c.b.v) + reach;
  const int j0 = std::max(0, static_cast<int>(std::floor(ymin - 0.5)));
  const int j1 = std::min(height - 1, static_cast<int>(std::ceil(ymax - 0.5)));
  const double dy = c.b.v - c.a.v;
  for (int j = j0; j <= j1; ++j) {
    const double yc = j + 0.5;
    double t0 = 0.0, t1 = 1.0;
    if (dy != 0.0) {
      double ta = (yc - reach - c.a.v) / dy, tb = (yc + reach - c.a.v) / dy;
      if (ta > tb) std::swap(ta, tb);
      t0 = std::max(0.0, ta);
      t1 = std::min(1.0, tb);
      if (t0 > t1) continue;
    } else if (std::abs(yc - c.a.v) > reach) {
      continue;
    }
    const double xa = c.a.u + t0 * (c.b.u - c.a.u);
    const double xb = c.a.u + t1 * (c.b.u - c.a.u);
    const int i0 = std::max(0, static_cast<int>(std::floor(std::min(xa, xb) - reach - 0.5)));
    const int i1 = std::min(width - 1, static_cast<int>(std::ceil(std::max(xa, xb) + reach - 0.5)));
    for (int i = i0; i <= i1; ++i) {
      const double d = distance_to_capsule_axis(c, i + 0.5, yc);
      if (d <= reach) visit(static_cast<std::size_t>(j) * width + i, d);
    }
  }
}

/// Accumulates per-pixel max coverage over a union of capsules, then hands
/// each touched pixel to a blend function exactly once.
class CoverageAccumulator {
public:
  CoverageAccumulator(int width, int height)
      : width_(width), height_(height), coverage_(static_cast<std::size_t>(width) * height, 0.0f) {}

  /// Box-filter approximation: coverage = clamp(radius + 0.5 - distance).
  void add(const Capsule& c) {
    scan_capsule(c, c.radius + 0.5, width_, height_, [&](std::size_t idx, double d) {
      const float cov = static_cast<float>(std::clamp(c.radius + 0.5 - d, 0.0, 1.0));
      if (cov <= 0.0f) return;
      float& slot = coverage_[idx];
      if (slot == 0.0f) touched_.push_back(idx);
      slot = std::max(slot, cov);
    });
  }

  template <typename Blend>
  void flush(Blend&& blend) {
    std::sort(touched_.begin(), touched_.end());
    for (std::size_t idx : touched_) {
      blend(idx, coverage_[idx]);
      coverage_[idx] = 0.0f;
    }
    touched_.clear();
  }

private:
  int width_, height_;
  std::vector<float> coverage_;
  std::vector<std::size_t> touched_;
};

/// Polyline as capsules with per-segment widths. A single point yields a disc.
inline std::vector<Capsule> polyline_capsules(std::span<const PixelPoint> points,
                                              std::span<const double> widths_px) {
  std::vector<Capsule> out;
  if (points.size() == 1) {
    out.push_back({points[0], points[0], widths_px.empty() ? 0.5 : widths_px[0] / 2});
    return out;
  }
  for (std::size_t k = 0; k + 1 < points.size(); ++k)
    out.push_back({points[k], points[k + 1], widths_px[std::min(k, widths_px.size() - 1)] / 2});
  return out;
}

/// Hard-edged stroke into a mask: a pixel is set iff its centre lies within
/// width/2 of the polyline.
inline void stroke_mask(Mask& mask, std::span<const Capsule> capsules, std::uint8_t id) {
  for (const Capsule& c : capsules)
    scan_capsule(c, c.radius, mask.width, mask.height,
                 [&](std::size_t idx, double) { mask.labels[idx] = id; });
}

inline void stroke_linear(LinearImage& img, CoverageAccumulator& acc,
                          std::span<const Capsule> capsules, const Rgb& color) {
  for (const Capsule& c : capsules) acc.add(c);
  acc.flush([&](std::size_t idx, float cov) {
    float* px = img.at(idx);
    px[0] += cov * (static_cast<float>(color.r) - px[0]);
    px[1] += cov * (static_cast<float>(color.g) - px[1]);
    px[2] += cov * (static_cast<float>(color.b) - px[2]);
  });
}

inline void check_polyline(std::span<const PixelPoint> points, double width_px) {
  if (points.size() < 2) throw std::invalid_argument("polyline needs at least 2 points");
  if (!(width_px > 0)) throw std::invalid_argument("stroke width must be > 0");
}

/// Anti-aliased stroke with round joins and caps. Blending happens in linear
/// light; `color` is given 8-bit gamma-encoded.
inline void draw_polyline(Image& img, std::span<const PixelPoint> points, double width_px,
                          std::array<std::uint8_t, 3> color) {
  check_polyline(points, width_px);
  const double w[] = {width_px};
  const auto caps = polyline_capsules(points, w);
  CoverageAccumulator acc(img.width, img.height);
  for (const Capsule& c : caps) acc.add(c);
  const double lin[3] = {decode_u8(color[0]), decode_u8(color[1]), decode_u8(color[2])};
  const auto& enc = GammaEncoder::instance();
  acc.flush([&](std::size_t idx, float cov) {
    std::uint8_t* px = &img.pixels[idx * 3];
    for (int ch = 0; ch < 3; ++ch) {
      const double base = decode_u8(px[ch]);
      px[ch] = enc(base + cov * (lin[ch] - base));
    }
  });
}

inline void draw_polyline(Mask& mask, std::span<const PixelPoint> points, double width_px,
                          std::uint8_t id) {
  check_polyline(points, width_px);
  const double w[] = {width_px};
  stroke_mask(mask, polyline_capsules(points, w), id);
}

}  // namespace fieldsynth
