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

// Task-driven crowd selection: choose k workers maximizing the probability
// tau that at least theta1 of them hold a positive opinion and at least
// theta0 a negative one.

#ifndef CROWDSEL_TMODEL_H_
#define CROWDSEL_TMODEL_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "crowdsel/combinatorics.h"
#include "crowdsel/pbd.h"

namespace crowdsel::tmodel {

// Candidate workers and their positive-opinion probabilities.
class CandidatePool {
 public:
  // Throws InvalidArgument on size mismatch, duplicate ids, or
  // probabilities outside [0, 1].
  CandidatePool(std::vector<std::string> ids, std::vector<double> probs);

  // Ids are the zero-based positions "0", "1", ...
  static CandidatePool FromProbs(std::vector<double> probs);

  std::size_t size() const { return probs_.size(); }
  const std::string& id(std::size_t i) const { return ids_[i]; }
  double prob(std::size_t i) const { return probs_[i]; }
  std::span<const double> probs() const { return probs_; }

 private:
  std::vector<std::string> ids_;
  std::vector<double> probs_;
};

enum class Method { kExact, kPoisson, kBinomial, kNormalSa, kDftCfSa, kRandom };

std::string_view MethodName(Method method);
std::optional<Method> ParseMethod(std::string_view name);

struct SelectionResult {
  std::vector<std::size_t> members;  // sorted pool indices
  std::vector<std::string> ids;      // ids of `members`, same order
  double tau = 0.0;        // exact window probability of the subset
  double objective = 0.0;  // the solver's own (possibly approximate) score
  Method method = Method::kExact;
  double wall_time_s = 0.0;
};

// Simulated annealing schedule. Defaults: T_ini = 1, T_end = 1e-4,
// 1000 moves per temperature, cooling ratio 0.9.
struct SaParams {
  double t_ini = 1.0;
  double t_end = 1e-4;
  int r = 1000;
  double c = 0.9;
  std::uint64_t seed = 0;

  // Throws InvalidArgument unless t_ini > t_end > 0, r >= 0, 0 < c < 1.
  void Validate() const;
};

enum class SaObjective { kNormal, kDftCf };

// Knapsack capacity: the peak location of the Poisson or Binomial surrogate.
struct KnapsackTarget {
  double omega = 0.0;
};

// Exact k-item knapsack by backtracking: a size-k subset of the pool
// maximizing the probability sum subject to sum <= omega, or nullopt if no
// size-k subset fits. Candidates are visited in ascending probability so the
// "k smallest exceed capacity" prune is tight. Returns sorted pool indices.
std::optional<std::vector<std::size_t>> BacktrackKnapsack(
    std::size_t k, KnapsackTarget target, const CandidatePool& pool);

// Full enumeration; ties go to the lexicographically smallest id list.
SelectionResult ExactSelect(const CandidatePool& pool,
                            const pbd::DemandWindow& window,
                            const Deadline& deadline = std::nullopt,
                            std::uint64_t guard = kEnumerationGuard);

// Knapsack toward the Poisson peak from below and (via the complement) from
// above; keeps the side with the larger Poisson window value.
SelectionResult SelectPoisson(const CandidatePool& pool,
                              const pbd::DemandWindow& window);

// As SelectPoisson with the Binomial peak k * p_star and the Binomial window.
SelectionResult SelectBinomial(const CandidatePool& pool,
                               const pbd::DemandWindow& window);

// Simulated annealing over size-k subsets with random k1-element swaps.
SelectionResult SaSelect(const CandidatePool& pool,
                         const pbd::DemandWindow& window,
                         SaObjective objective, const SaParams& params);

// Uniform random size-k subset. For a given seed this is also the starting
// subset of SaSelect.
SelectionResult RandomSelect(const CandidatePool& pool,
                             const pbd::DemandWindow& window,
                             std::uint64_t seed);

}  // namespace crowdsel::tmodel

#endif  // CROWDSEL_TMODEL_H_
