// Copyright 2026 The iaood Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef IAOOD_RNG_H_
#define IAOOD_RNG_H_

#include <cmath>
#include <cstdint>
#include <numbers>

namespace iaood {

// SplitMix64 (Steele, Lea & Flood 2014). Every synthetic stream in the
// project is drawn from this generator so that fixtures are reproducible
// from the seed alone, independent of the standard library in use.
class SplitMix64 {
 public:
  static constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ull;

  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  static constexpr std::uint64_t Mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  std::uint64_t Next() {
    state_ += kGamma;
    return Mix(state_);
  }

  // [0, 1) with 53 random bits.
  double Uniform() {
    return static_cast<double>(Next() >> 11) * 0x1.0p-53;
  }

  // Uniform integer in [0, n); n > 0. Rejection keeps it unbiased.
  std::uint64_t Below(std::uint64_t n) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t x = Next();
    while (x >= limit) x = Next();
    return x % n;
  }

  // Inclusive range [lo, hi].
  std::int64_t Between(std::int64_t lo, std::int64_t hi) {
    return lo + static_cast<std::int64_t>(
                    Below(static_cast<std::uint64_t>(hi - lo) + 1));
  }

  // Box-Muller; always consumes exactly two draws.
  double Gaussian(double mean, double sigma) {
    const double u1 = 1.0 - Uniform();  // (0, 1]
    const double u2 = Uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    return mean + sigma * radius * std::cos(2.0 * std::numbers::pi * u2);
  }

 private:
  std::uint64_t state_;
};

// Independent stream for (master seed, sample index, purpose).
constexpr std::uint64_t DeriveSeed(std::uint64_t master, std::uint64_t index,
                                   std::uint64_t stream) {
  return SplitMix64::Mix(master ^ SplitMix64::Mix(index + SplitMix64::kGamma) ^
                         SplitMix64::Mix(stream * 0xD1B54A32D192ED03ull + 1));
}

}  // namespace iaood

#endif  // IAOOD_RNG_H_
