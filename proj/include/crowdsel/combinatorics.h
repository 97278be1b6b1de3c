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

#ifndef CROWDSEL_COMBINATORICS_H_
#define CROWDSEL_COMBINATORICS_H_

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <optional>

namespace crowdsel {

// Default cap on the number of subsets an exact solver may enumerate.
inline constexpr std::uint64_t kEnumerationGuard = 10'000'000;

// C(n, k), saturating at UINT64_MAX.
std::uint64_t ChooseSaturating(std::size_t n, std::size_t k);

using Clock = std::chrono::steady_clock;
using Deadline = std::optional<Clock::time_point>;

// Throws Timeout if the deadline has passed.
void CheckDeadline(const Deadline& deadline);

}  // namespace crowdsel

#endif  // CROWDSEL_COMBINATORICS_H_
