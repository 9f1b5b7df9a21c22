// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>

namespace specpencil {

/// Deterministic 64-bit-state PCG generator (pcg32, oneseq variant).
///
/// Recurrence, fixed across platforms and languages:
///   state <- state * 6364136223846793005 + 1442695040888963407   (mod 2^64)
///   output = rotr32((uint32)(((old_state >> 18) ^ old_state) >> 27),
///                   old_state >> 59)
/// Seeding: state = 0; advance once; state += seed; advance once.
/// uniform() packs two consecutive outputs into the top 53 bits of a
/// uint64 and scales by 2^-53, yielding a double in [0, 1).
class Pcg32 {
public:
  explicit Pcg32(std::uint64_t seed) : state_(0) {
    next();
    state_ += seed;
    next();
  }

  std::uint32_t next() {
    const std::uint64_t old = state_;
    state_ = old * 6364136223846793005ULL + 1442695040888963407ULL;
    const auto xorshifted =
        static_cast<std::uint32_t>(((old >> 18u) ^ old) >> 27u);
    const auto rot = static_cast<std::uint32_t>(old >> 59u);
    return (xorshifted >> rot) | (xorshifted << ((32u - rot) & 31u));
  }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() {
    const std::uint64_t hi = next();
    const std::uint64_t lo = next();
    return static_cast<double>(((hi << 32) | lo) >> 11) * 0x1.0p-53;
  }

  /// Uniform double in [a, b).
  double uniform(double a, double b) { return a + (b - a) * uniform(); }

  /// Uniform integer in [0, n).
  std::uint32_t below(std::uint32_t n) {
    return static_cast<std::uint32_t>(uniform() * n);
  }

private:
  std::uint64_t state_;
};

}  // namespace specpencil
