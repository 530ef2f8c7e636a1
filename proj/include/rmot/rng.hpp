// Copyright 2026 The rmot Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef RMOT_RNG_HPP
#define RMOT_RNG_HPP

#include <cstdint>

#include <boost/random/mersenne_twister.hpp>
#include <boost/random/normal_distribution.hpp>
#include <boost/random/uniform_01.hpp>

namespace rmot {

// 64-bit Mersenne Twister with Boost.Random distributions. Unlike the
// <random> distributions these produce the same stream on every platform
// and standard library, so seeded outputs are reproducible byte-for-byte.
using Rng = boost::random::mt19937_64;

inline double uniform01(Rng& rng) { return boost::random::uniform_01<double>{}(rng); }

inline double standard_normal(Rng& rng) {
  return boost::random::normal_distribution<double>{0.0, 1.0}(rng);
}

// Decorrelated child seed for replicate `k` of an experiment seeded with
// `base` (splitmix64 finalizer).
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t k) {
  std::uint64_t z = base + 0x9E3779B97F4A7C15ULL * (k + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace rmot

#endif  // RMOT_RNG_HPP
