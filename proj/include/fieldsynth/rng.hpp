#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace fieldsynth {

/// SplitMix64 finaliser. Also the documented per-sample seed mix:
///   sample_seed(master, i) = mix64(master + (i + 1) * 0x9E3779B97F4A7C15)
/// i.e. the i-th output of a SplitMix64 stream started at `master`.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

inline constexpr std::uint64_t kGoldenGamma = 0x9E3779B97F4A7C15ULL;
inline constexpr std::string_view kSeedMixDescription =
    "splitmix64: seed_i = mix64(master_seed + (i + 1) * 0x9E3779B97F4A7C15), "
    "mix64(z): z ^= z >> 30; z *= 0xBF58476D1CE4E5B9; z ^= z >> 27; z *= 0x94D049BB133111EB; "
    "z ^= z >> 31";

constexpr std::uint64_t sample_seed(std::uint64_t master, std::uint64_t index) {
  return mix64(master + (index + 1) * kGoldenGamma);
}

constexpr std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (char c : s) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001B3ULL;
  }
  return h;
}

/// Seeded random stream. Engine output is fully specified by the standard;
/// the value mappings below are our own so results do not depend on the
/// standard library's distribution implementations.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : seed_(seed), engine_(seed) {}

  std::uint64_t seed() const noexcept { return seed_; }

  /// Independent stream keyed by a tag; does not advance this stream.
  Rng substream(std::string_view tag) const { return Rng(mix64(seed_ ^ fnv1a(tag))); }
  Rng substream(std::uint64_t key) const { return Rng(mix64(seed_ + (key + 1) * kGoldenGamma)); }

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform in [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform integer in [lo, hi], unbiased by rejection.
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
    const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
    if (span == 0) return static_cast<std::int64_t>(engine_());
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % span;
    std::uint64_t x;
    do x = engine_();
    while (x >= limit);
    return lo + static_cast<std::int64_t>(x % span);
  }

  bool bernoulli(double p) { return uniform() < p; }

private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

}  // namespace fieldsynth
