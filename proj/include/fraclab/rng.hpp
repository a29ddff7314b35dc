#pragma once

#include <cstdint>

namespace fraclab {

/// splitmix64 step; bijective on uint64.
std::uint64_t splitmix64(std::uint64_t& state);

/// Deterministic per-member seed derivation: splitmix64 mixing of
/// base + golden-ratio * (index+1). Injective in index for a fixed base.
std::uint64_t seed_fanout(std::uint64_t base_seed, std::uint64_t member_index);

/// xoshiro256++ stream with Box-Muller gaussians. One instance per work unit;
/// instances never share state.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  std::uint64_t next_u64();
  /// Uniform on (0,1): 53-bit mantissa, never returns 0.
  double uniform01();
  double gaussian();

 private:
  std::uint64_t s_[4];
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace fraclab
