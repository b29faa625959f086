// Copyright 2026 The Judgerank Authors.
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

#ifndef JUDGERANK_RANDOM_H_
#define JUDGERANK_RANDOM_H_

// Portable seeded randomness. std::mt19937_64's output sequence is fixed by
// the standard, but the std:: distributions are not, so bounded integers and
// normals are derived here to keep runs reproducible across toolchains.

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <numbers>
#include <random>
#include <string_view>

namespace judgerank {

constexpr std::uint64_t SplitMix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

constexpr std::uint64_t HashString(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;  // FNV-1a
  for (char c : s) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

// Seed of an independent substream named by `tag` and integer coordinates.
inline std::uint64_t SubstreamSeed(std::uint64_t seed, std::string_view tag,
                                   std::initializer_list<std::uint64_t> coords) {
  std::uint64_t h = SplitMix64(seed ^ HashString(tag));
  for (std::uint64_t c : coords) h = SplitMix64(h ^ c);
  return h;
}

// Uniform integer in [0, n) by rejection sampling. n must be positive.
inline std::uint64_t UniformIndex(std::mt19937_64& rng, std::uint64_t n) {
  const std::uint64_t limit = ~0ULL - (~0ULL % n);
  std::uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return x % n;
}

// Uniform double in (0, 1) from the top 53 bits.
inline double UniformOpen(std::mt19937_64& rng) {
  return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
}

// Standard normal via Box-Muller; consumes two draws.
inline double StandardNormal(std::mt19937_64& rng) {
  double u1 = UniformOpen(rng);
  double u2 = UniformOpen(rng);
  return std::sqrt(-2.0 * std::log(u1)) *
         std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace judgerank

#endif  // JUDGERANK_RANDOM_H_
