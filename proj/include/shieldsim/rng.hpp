// Copyright 2026 The shieldsim Authors
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

#ifndef SHIELDSIM_RNG_HPP_
#define SHIELDSIM_RNG_HPP_

#include <cstdint>
#include <random>

namespace shieldsim {

/// Seeded 64-bit generator. Uniform draws are derived from raw engine output
/// so streams are identical across standard library implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform on [0, 1]; both endpoints are reachable.
  double Unit() { return UnitFromBits(engine_()); }
  /// Uniform on [lo, hi].
  double Uniform(double lo, double hi) { return lo + (hi - lo) * Unit(); }
  std::uint64_t Next() { return engine_(); }

  static double UnitFromBits(std::uint64_t bits) {
    return static_cast<double>(bits >> 11) / static_cast<double>((1ULL << 53) - 1);
  }

 private:
  std::mt19937_64 engine_;
};

/// Derives an independent stream seed from a base seed and an index.
constexpr std::uint64_t MixSeed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace shieldsim

#endif  // SHIELDSIM_RNG_HPP_
