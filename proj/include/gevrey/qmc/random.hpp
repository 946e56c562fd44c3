#pragma once

#include <cstdint>

namespace gevrey::qmc {

/// SplitMix64 output mixer (Steele, Lea, Flood 2014).
constexpr std::uint64_t splitmix64_mix(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Counter-based stream keyed by (seed, stream). Draw k is
///   mix(key + (k + 1) * golden),  key = mix(mix(seed) ^ mix(stream + golden)),
/// i.e. the k-th SplitMix64 output from state `key`. Any draw can be computed
/// without touching the others, so workers need no shared generator.
class CounterStream {
 public:
  static constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

  constexpr CounterStream(std::uint64_t seed, std::uint64_t stream) noexcept
      : key_(splitmix64_mix(splitmix64_mix(seed) ^ splitmix64_mix(stream + kGolden))) {}

  constexpr std::uint64_t bits(std::uint64_t counter) const noexcept {
    return splitmix64_mix(key_ + (counter + 1) * kGolden);
  }

  /// Uniform in [0, 1) from the top 53 bits.
  constexpr double uniform(std::uint64_t counter) const noexcept {
    return static_cast<double>(bits(counter) >> 11) * 0x1.0p-53;
  }

 private:
  std::uint64_t key_;
};

}  // namespace gevrey::qmc
