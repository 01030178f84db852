#pragma once

#include <cstdint>

#include "berezin/matrix.hpp"

namespace berezin {

/// SplitMix64 finalizer.
std::uint64_t mix64(std::uint64_t x) noexcept;

/// Counter-based stream: the i-th draw is mix64(seed + (i + 1) * golden),
/// so any draw can be reproduced from (seed, i) alone.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed) noexcept : seed_(seed) {}

  std::uint64_t next_u64() noexcept;
  /// Uniform in [0, 1) with 53 random bits.
  double uniform() noexcept;
  /// Uniform in (0, 1]; safe for log().
  double uniform_open() noexcept;
  /// Standard normal via Box-Muller (cosine branch only, two uniforms per draw).
  double normal() noexcept;
  /// Real and imaginary parts independent standard normals.
  cplx complex_normal() noexcept;

  std::uint64_t counter() const noexcept { return counter_; }

 private:
  std::uint64_t seed_;
  std::uint64_t counter_ = 0;
};

}  // namespace berezin
