#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "fieldsynth/raster.hpp"

using namespace fieldsynth;

namespace {

double segment_distance(PixelPoint a, PixelPoint b, double x, double y) {
  const double dx = b.u - a.u, dy = b.v - a.v;
  const double len2 = dx * dx + dy * dy;
  const double t = len2 == 0 ? 0.0 : std::clamp(((x - a.u) * dx + (y - a.v) * dy) / len2, 0.0, 1.0);
  return std::hypot(a.u + t * dx - x, a.v + t * dy - y);
}

// Every pixel whose centre is within width/2 of any segment, found by
// checking all pixels.
Mask brute_force_band(int w, int h, const std::vector<PixelPoint>& pts, double width, std::uint8_t id) {
  Mask m(w, h);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x)
      for (std::size_t k = 0; k + 1 < pts.size(); ++k)
        if (segment_distance(pts[k], pts[k + 1], x + 0.5, y + 0.5) <= width / 2) {
          m.at(x, y) = id;
          break;
        }
  return m;
}

}  // namespace

TEST(DrawPolyline, HorizontalBandOnMask) {
  Mask m(40, 20);
  const std::vector<PixelPoint> pts = {{5.0, 10.5}, {30.0, 10.5}};
  draw_polyline(m, pts, 3.0, 4);
  EXPECT_EQ(m, brute_force_band(40, 20, pts, 3.0, 4));
  // three rows tall: centres 9.5, 10.5, 11.5 are within 1.5 of the axis
  for (int y : {9, 10, 11}) EXPECT_EQ(m.at(17, y), 4);
  for (int y : {8, 12}) EXPECT_EQ(m.at(17, y), 0);
  // round caps reach one and a half pixels past the ends
  EXPECT_EQ(m.at(3, 10), 4);
  EXPECT_EQ(m.at(2, 10), 0);
}

TEST(DrawPolyline, RandomPolylinesMatchBruteForce) {
  std::mt19937_64 gen(17);
  std::uniform_real_distribution<double> x(-10.0, 74.0), y(-10.0, 58.0), w(0.3, 9.0);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<PixelPoint> pts(2 + trial % 4);
    for (auto& p : pts) p = {x(gen), y(gen)};
    const double width = w(gen);
    Mask m(64, 48);
    draw_polyline(m, pts, width, 9);
    ASSERT_EQ(m, brute_force_band(64, 48, pts, width, 9)) << "trial " << trial;
  }
}

TEST(DrawPolyline, CoincidentPointsMakeADisc) {
  Mask m(21, 21);
  const std::vector<PixelPoint> pts = {{10.5, 10.5}, {10.5, 10.5}, {10.5, 10.5}};
  draw_polyline(m, pts, 7.0, 1);
  for (int y = 0; y < 21; ++y)
    for (int x = 0; x < 21; ++x)
      EXPECT_EQ(m.at(x, y) == 1, std::hypot(x - 10, y - 10) <= 3.5) << x << "," << y;
}

TEST(DrawPolyline, MaskIsIdempotent) {
  Mask m(50, 50);
  const std::vector<PixelPoint> pts = {{3, 4}, {40, 20}, {10, 45}};
  draw_polyline(m, pts, 4.0, 7);
  const Mask once = m;
  draw_polyline(m, pts, 4.0, 7);
  EXPECT_EQ(m, once);
}

TEST(DrawPolyline, ImageFullCoverageIsStable) {
  Image img(60, 40, 30);
  const std::vector<PixelPoint> pts = {{5, 20}, {55, 20}};
  draw_polyline(img, pts, 6.0, {255, 255, 255});
  const Image once = img;
  draw_polyline(img, pts, 6.0, {255, 255, 255});
  // fully covered pixels already carry the style colour and stay put
  for (int x = 10; x < 50; ++x)
    for (int y = 18; y < 22; ++y) {
      EXPECT_EQ(img.at(x, y)[0], 255);
      EXPECT_EQ(img.at(x, y)[0], once.at(x, y)[0]);
    }
  // untouched pixels stay put
  EXPECT_EQ(img.at(30, 5)[1], 30);
}

TEST(DrawPolyline, AntiAliasedAreaMatchesGeometry) {
  // white on black: encoded values decode straight back to coverage
  Image img(200, 60, 0);
  const std::vector<PixelPoint> pts = {{20.3, 30.2}, {180.1, 27.9}};
  const double width = 5.0;
  draw_polyline(img, pts, width, {255, 255, 255});
  double area = 0;
  for (int y = 0; y < img.height; ++y)
    for (int x = 0; x < img.width; ++x) area += decode_u8(img.at(x, y)[0]);
  const double len = std::hypot(pts[1].u - pts[0].u, pts[1].v - pts[0].v);
  const double expected = len * width + std::numbers::pi * width * width / 4;
  EXPECT_NEAR(area, expected, 0.02 * expected);
}

TEST(DrawPolyline, SupersampledCoverageOracle) {
  // per-pixel coverage vs 16x16 supersampling of the exact capsule
  Image img(40, 40, 0);
  const std::vector<PixelPoint> pts = {{6.2, 7.7}, {33.9, 29.3}};
  const double width = 4.0;
  draw_polyline(img, pts, width, {255, 255, 255});
  double worst = 0;
  for (int y = 0; y < 40; ++y)
    for (int x = 0; x < 40; ++x) {
      int inside = 0;
      for (int sy = 0; sy < 16; ++sy)
        for (int sx = 0; sx < 16; ++sx)
          inside += segment_distance(pts[0], pts[1], x + (sx + 0.5) / 16, y + (sy + 0.5) / 16) <= width / 2;
      worst = std::max(worst, std::abs(decode_u8(img.at(x, y)[0]) - inside / 256.0));
    }
  EXPECT_LT(worst, 0.3);
}

TEST(DrawPolyline, RejectsBadInput) {
  Mask m(10, 10);
  const std::vector<PixelPoint> one = {{1, 1}};
  const std::vector<PixelPoint> two = {{1, 1}, {5, 5}};
  EXPECT_THROW(draw_polyline(m, one, 2.0, 1), std::invalid_argument);
  EXPECT_THROW(draw_polyline(m, two, 0.0, 1), std::invalid_argument);
}

TEST(DrawPolyline, ClipsAtImageEdges) {
  Mask m(10, 10);
  const std::vector<PixelPoint> pts = {{-100, 5}, {100, 5}};
  draw_polyline(m, pts, 2.0, 3);
  for (int x = 0; x < 10; ++x) {
    EXPECT_EQ(m.at(x, 4), 3);
    EXPECT_EQ(m.at(x, 5), 3);
    EXPECT_EQ(m.at(x, 6), 0);
  }
}

TEST(Gamma, EncodeDecodeRoundTrip) {
  const auto& enc = GammaEncoder::instance();
  for (int v = 0; v < 256; ++v) EXPECT_EQ(enc(decode_u8(static_cast<std::uint8_t>(v))), v);
  EXPECT_EQ(enc(0.0), 0);
  EXPECT_EQ(enc(1.0), 255);
  EXPECT_EQ(enc(2.0), 255);
}
