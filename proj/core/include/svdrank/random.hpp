#pragma once

#include <cstdint>

namespace svdrank {

/// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Seedable, stream-splittable generator with bit-exact output on every
/// platform.
///
/// Each (seed, stream) pair selects an independent SplitMix64 sequence whose
/// initial state is mix64(seed + mix64(stream + 0x9e3779b97f4a7c15)). Random
/// graph generation uses one stream per unordered pair {i, j}, so a draw for
/// a given pair never depends on the order in which pairs are visited.
///
/// The real-valued conversions are implemented here rather than through
/// <random> distributions, whose output is implementation-defined.
class StreamRng {
 public:
  StreamRng(std::uint64_t seed, std::uint64_t stream) noexcept
      : state_(mix64(seed + mix64(stream + kGolden))) {}

  std::uint64_t next() noexcept {
    state_ += kGolden;
    return mix64(state_);
  }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform01() noexcept { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform01(); }

  /// Standard normal via the Marsaglia polar method.
  double normal() noexcept;

  /// Gamma(shape, scale) via Marsaglia-Tsang, with the shape < 1 boost.
  double gamma(double shape, double scale) noexcept;

 private:
  static constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

  std::uint64_t state_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

/// Derives a child seed; used to give every sweep cell its own master seed.
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0,
                                    std::uint64_t c = 0) noexcept {
  std::uint64_t h = mix64(seed ^ 0x243f6a8885a308d3ULL);
  h = mix64(h ^ (a + 0x13198a2e03707344ULL));
  h = mix64(h ^ (b + 0xa4093822299f31d0ULL));
  return mix64(h ^ (c + 0x082efa98ec4e6c89ULL));
}

}  // namespace svdrank
