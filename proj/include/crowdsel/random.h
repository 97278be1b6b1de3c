// Copyright 2026 The Authors.
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

// Seeded random streams. Everything here is defined in terms of raw
// mt19937_64 output so results do not depend on the standard library's
// distribution implementations.

#ifndef CROWDSEL_RANDOM_H_
#define CROWDSEL_RANDOM_H_

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace crowdsel {

using Rng = std::mt19937_64;

// splitmix64 finalizer; used to derive independent per-trial seeds.
std::uint64_t MixSeed(std::uint64_t base, std::uint64_t index);

// Uniform double in [0, 1).
double Uniform01(Rng& rng);

// Uniform integer in [0, n). n must be positive.
std::size_t UniformIndex(Rng& rng, std::size_t n);

// Uniform integer in [lo, hi], lo <= hi.
std::int64_t UniformInt(Rng& rng, std::int64_t lo, std::int64_t hi);

// Standard normal draw (Box-Muller, one value per call).
double StandardNormal(Rng& rng);

// Moves a uniformly random size-m sample of `items` to its front
// (partial Fisher-Yates). Requires m <= items.size().
void PartialShuffle(Rng& rng, std::span<std::size_t> items, std::size_t m);

// Uniform size-k subset of {0..n-1}, returned sorted.
std::vector<std::size_t> SampleSubset(Rng& rng, std::size_t n, std::size_t k);

}  // namespace crowdsel

#endif  // CROWDSEL_RANDOM_H_
