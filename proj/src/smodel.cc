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

#include "crowdsel/smodel.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "crowdsel/errors.h"
#include "crowdsel/random.h"

namespace crowdsel::smodel {

SimilarityMatrix::SimilarityMatrix(std::size_t n, std::vector<double> row_major,
                                   double symmetry_tolerance)
    : n_(n), sim_(std::move(row_major)) {
  if (sim_.size() != n * n) {
    throw InvalidArgument("similarity matrix needs " + std::to_string(n * n) +
                          " entries, got " + std::to_string(sim_.size()));
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double a = sim_[i * n + j];
      if (!std::isfinite(a)) {
        throw InvalidArgument("similarity (" + std::to_string(i) + ", " +
                              std::to_string(j) + ") is not finite");
      }
      if (j > i && std::abs(a - sim_[j * n + i]) > symmetry_tolerance) {
        throw InvalidArgument("similarity matrix is not symmetric at (" +
                              std::to_string(i) + ", " + std::to_string(j) +
                              ")");
      }
    }
  }
}

SimilarityMatrix SimilarityMatrix::FromRows(
    const std::vector<std::vector<double>>& rows) {
  const std::size_t n = rows.size();
  std::vector<double> flat;
  flat.reserve(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    if (rows[i].size() != n) {
      throw InvalidArgument("row " + std::to_string(i) + " has " +
                            std::to_string(rows[i].size()) +
                            " entries, expected " + std::to_string(n));
    }
    flat.insert(flat.end(), rows[i].begin(), rows[i].end());
  }
  return SimilarityMatrix(n, std::move(flat));
}

void ValidateCrowd(const Crowd& crowd, std::size_t n) {
  std::vector<bool> seen(n, false);
  for (std::size_t w : crowd) {
    if (w >= n) {
      throw InvalidArgument("worker index " + std::to_string(w) +
                            " out of range for " + std::to_string(n) +
                            " workers");
    }
    if (seen[w]) {
      throw InvalidArgument("worker index " + std::to_string(w) +
                            " appears twice");
    }
    seen[w] = true;
  }
}

double SumObjective(const Crowd& crowd, const SimilarityMatrix& sim) {
  ValidateCrowd(crowd, sim.n());
  double total = 0.0;
  for (std::size_t a = 0; a < crowd.size(); ++a) {
    for (std::size_t b = a + 1; b < crowd.size(); ++b) {
      total += sim(crowd[a], crowd[b]);
    }
  }
  return -total;
}

double Diversity(const Crowd& crowd, const SimilarityMatrix& sim) {
  if (crowd.empty()) throw InvalidArgument("diversity of an empty crowd");
  return SumObjective(crowd, sim) / static_cast<double>(crowd.size());
}

Crowd ExactSelect(const SimilarityMatrix& sim, std::size_t k,
                  const Deadline& deadline, std::uint64_t guard) {
  const std::size_t n = sim.n();
  if (k < 1 || k > n) {
    throw InvalidArgument("k = " + std::to_string(k) + " must lie in [1, " +
                          std::to_string(n) + "]");
  }
  if (ChooseSaturating(n, k) > guard) {
    throw SizeLimitExceeded("C(" + std::to_string(n) + ", " +
                            std::to_string(k) +
                            ") exceeds the enumeration guard");
  }

  // Lexicographic enumeration. prefix[d] is the pair-similarity total of
  // idx[0..d-1]; only the suffix after the changed position is recomputed.
  std::vector<std::size_t> idx(k);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::vector<double> prefix(k + 1, 0.0);
  auto rebuild = [&](std::size_t from) {
    for (std::size_t d = from; d < k; ++d) {
      double add = 0.0;
      for (std::size_t e = 0; e < d; ++e) add += sim(idx[e], idx[d]);
      prefix[d + 1] = prefix[d] + add;
    }
  };
  rebuild(0);

  Crowd best = idx;
  double best_total = prefix[k];
  std::uint64_t visited = 0;
  while (true) {
    if (prefix[k] < best_total) {
      best_total = prefix[k];
      best = idx;
    }
    if ((++visited & 0xFFF) == 0) CheckDeadline(deadline);

    std::size_t i = k;
    while (i > 0 && idx[i - 1] == n - k + i - 1) --i;
    if (i == 0) break;
    ++idx[i - 1];
    for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
    rebuild(i - 1);
  }
  return best;
}

Crowd GreedySelect(const SimilarityMatrix& sim, std::size_t k) {
  const std::size_t n = sim.n();
  if (k < 2 || k > n) {
    throw InvalidArgument("greedy selection needs 2 <= k <= n, got k = " +
                          std::to_string(k));
  }

  std::size_t seed_a = 0;
  std::size_t seed_b = 1;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (sim(i, j) < sim(seed_a, seed_b)) {
        seed_a = i;
        seed_b = j;
      }
    }
  }

  Crowd crowd{seed_a, seed_b};
  std::vector<bool> in_crowd(n, false);
  in_crowd[seed_a] = in_crowd[seed_b] = true;
  // load[w] = sum of sim(w, c) over current members c. Maximizing
  // Div(C + w) at fixed |C| is minimizing load[w].
  std::vector<double> load(n, 0.0);
  for (std::size_t w = 0; w < n; ++w) load[w] = sim(w, seed_a) + sim(w, seed_b);

  while (crowd.size() < k) {
    std::size_t pick = n;
    for (std::size_t w = 0; w < n; ++w) {
      if (in_crowd[w]) continue;
      if (pick == n || load[w] < load[pick]) pick = w;
    }
    crowd.push_back(pick);
    in_crowd[pick] = true;
    for (std::size_t w = 0; w < n; ++w) load[w] += sim(w, pick);
  }
  std::sort(crowd.begin(), crowd.end());
  return crowd;
}

Crowd RandomSelect(std::size_t n, std::size_t k, std::uint64_t seed) {
  if (k > n) {
    throw InvalidArgument("cannot draw " + std::to_string(k) +
                          " workers from " + std::to_string(n));
  }
  Rng rng(seed);
  return SampleSubset(rng, n, k);
}

}  // namespace crowdsel::smodel
