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

// Similarity-driven crowd selection: choose k workers whose average pairwise
// similarity is as low as possible.

#ifndef CROWDSEL_SMODEL_H_
#define CROWDSEL_SMODEL_H_

#include <cstddef>
#include <cstdint>
#include <vector>

#include "crowdsel/combinatorics.h"

namespace crowdsel::smodel {

// Symmetric n x n pairwise similarity scores. The diagonal is stored but
// never read by any objective.
class SimilarityMatrix {
 public:
  // `row_major` holds n * n entries. Throws InvalidArgument if the size is
  // wrong, an entry is not finite, or |s(i,j) - s(j,i)| > symmetry_tolerance.
  SimilarityMatrix(std::size_t n, std::vector<double> row_major,
                   double symmetry_tolerance = 1e-9);

  static SimilarityMatrix FromRows(
      const std::vector<std::vector<double>>& rows);

  std::size_t n() const { return n_; }
  double operator()(std::size_t i, std::size_t j) const {
    return sim_[i * n_ + j];
  }

 private:
  std::size_t n_;
  std::vector<double> sim_;
};

// Distinct worker indices; solvers return them sorted ascending.
using Crowd = std::vector<std::size_t>;

// Throws InvalidArgument on duplicates or indices >= n.
void ValidateCrowd(const Crowd& crowd, std::size_t n);

// Negated sum of similarities over unordered pairs in the crowd.
// Empty and singleton crowds score 0.
double SumObjective(const Crowd& crowd, const SimilarityMatrix& sim);

// SumObjective / |crowd|. Throws InvalidArgument for an empty crowd.
double Diversity(const Crowd& crowd, const SimilarityMatrix& sim);

// Best size-k crowd by full enumeration; ties go to the lexicographically
// smallest member list. Throws InvalidArgument unless 1 <= k <= n,
// SizeLimitExceeded when C(n, k) > guard, and Timeout past the deadline.
Crowd ExactSelect(const SimilarityMatrix& sim, std::size_t k,
                  const Deadline& deadline = std::nullopt,
                  std::uint64_t guard = kEnumerationGuard);

// Greedy hill climbing: start from the least similar pair, then repeatedly
// add the worker that maximizes the diversity of the grown crowd. Ties go to
// the smaller index. Requires 2 <= k <= n.
Crowd GreedySelect(const SimilarityMatrix& sim, std::size_t k);

// Uniformly random size-k crowd drawn from `seed`. Requires k <= n.
Crowd RandomSelect(std::size_t n, std::size_t k, std::uint64_t seed);

}  // namespace crowdsel::smodel

#endif  // CROWDSEL_SMODEL_H_
