// Copyright 2026 The skanon Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//
// Deterministic counter-based randomness built on the SplitMix64 output
// function (Steele, Lea and Flood, "Fast splittable pseudorandom number
// generators"). Every draw is a pure function of (seed, stream, index), so
// runs are reproducible across platforms and the same row always sees the
// same coin regardless of evaluation order.

#ifndef SKANON_RNG_HPP_
#define SKANON_RNG_HPP_

#include <cmath>
#include <cstdint>

#include "skanon/errors.hpp"

namespace skanon {

// Weyl increment used by SplitMix64 (2^64 / golden ratio, rounded to odd).
inline constexpr std::uint64_t kGoldenGamma = 0x9E3779B97F4A7C15ULL;

// Stream tags keep unrelated uses of one seed statistically independent.
inline constexpr std::uint64_t kStreamSample = 1;     // row inclusion coins
inline constexpr std::uint64_t kStreamSelect = 2;     // scheme selection
inline constexpr std::uint64_t kStreamTrial = 3;      // per-trial sub-seeds
inline constexpr std::uint64_t kStreamNoise = 4;      // additive noise draws

// SplitMix64 finalizer: bijective mixing of a 64-bit state.
inline std::uint64_t splitmix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// The index-th output of the stream identified by (seed, stream).
inline std::uint64_t draw_bits(std::uint64_t seed, std::uint64_t stream,
                               std::uint64_t index) {
  std::uint64_t base = splitmix64(seed + stream * kGoldenGamma);
  return splitmix64(base + (index + 1) * kGoldenGamma);
}

// Maps 64 random bits to the open interval (0,1). The +0.5 offset keeps the
// result away from both endpoints, so log(u) and log(1-u) are always finite.
inline double bits_to_u01(std::uint64_t bits) {
  return (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53;
}

inline double draw_u01(std::uint64_t seed, std::uint64_t stream,
                       std::uint64_t index) {
  return bits_to_u01(draw_bits(seed, stream, index));
}

// Inverse-CDF transform of a uniform u in (0,1) to Laplace(0, scale).
inline double laplace_from_u01(double u, double scale) {
  if (!(scale > 0.0)) throw DomainError("laplace scale must be positive");
  if (!(u > 0.0 && u < 1.0)) throw DomainError("uniform draw must be in (0,1)");
  double centered = u - 0.5;
  double sign = centered < 0.0 ? -1.0 : 1.0;
  return -scale * sign * std::log1p(-2.0 * std::fabs(centered));
}

}  // namespace skanon

#endif  // SKANON_RNG_HPP_
