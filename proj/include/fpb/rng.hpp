#pragma once

#include <cstdint>

namespace fpb {

/// SplitMix64 generator (Steele, Lea & Flood 2014; constants as in Vigna's
/// reference implementation).
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t state) : state_(state) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    return mix(z);
  }

  /// Uniform double in [0, 1) from the top 53 bits.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

 private:
  std::uint64_t state_;
};

/// Version of the substream derivation below. Changing it changes every
/// simulated tally.
inline constexpr int kSubstreamVersion = 1;

/// Independent generator for item `index` of the stream `seed`:
/// state = mix(seed ^ mix(index + golden gamma)).
inline SplitMix64 substream(std::uint64_t seed, std::uint64_t index) {
  return SplitMix64(SplitMix64::mix(seed ^ SplitMix64::mix(index + 0x9E3779B97F4A7C15ULL)));
}

}  // namespace fpb
