// Copyright 2026 The qmeasure Authors
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

/**
 * @file
 * Seeded random streams.
 *
 * Every random quantity in the library flows from a single 64-bit seed.
 * Independent streams (one per trial, one per sweep point) are split off
 * with a counter-based SplitMix64 derivation, so a stream depends only on
 * (seed, index) and never on execution order or thread count.
 *
 * The uniform and normal conversions are written out here instead of using
 * std::uniform_real_distribution / std::normal_distribution, whose output
 * is implementation-defined. std::mt19937_64 itself is fully specified by
 * the standard, so output files are reproducible across toolchains.
 */

#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace qmeasure {

/// SplitMix64 finalizer.
[[nodiscard]] constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30U)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27U)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31U);
}

/// Sub-seed for stream `index` of `seed`: the (index+1)-th SplitMix64 output
/// of a generator started at `seed`.
[[nodiscard]] constexpr std::uint64_t derive_seed(std::uint64_t seed,
                                                  std::uint64_t index) noexcept {
    constexpr std::uint64_t golden_gamma = 0x9E3779B97F4A7C15ULL;
    return mix64(seed + (index + 1U) * golden_gamma);
}

class Rng {
  public:
    explicit Rng(std::uint64_t seed) : engine_(mix64(seed)) {}

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform() {
        return static_cast<double>(engine_() >> 11U) * 0x1.0p-53;
    }

    /// Uniform double in [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Standard normal via Box-Muller; consumes two uniforms per call.
    double normal() {
        const double u1 = 1.0 - uniform(); // (0, 1]
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) *
               std::cos(2.0 * std::numbers::pi * u2);
    }

    std::uint64_t bits() { return engine_(); }

  private:
    std::mt19937_64 engine_;
};

} // namespace qmeasure
