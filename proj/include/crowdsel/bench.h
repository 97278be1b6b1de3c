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

// Synthetic data and the experiment harness comparing selection methods
// against the random baseline.

#ifndef CROWDSEL_BENCH_H_
#define CROWDSEL_BENCH_H_

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "crowdsel/smodel.h"
#include "crowdsel/tmodel.h"
#include "json.hpp"

namespace crowdsel::bench {

struct DistributionSpec {
  enum class Kind { kUniform, kNormal };
  Kind kind = Kind::kUniform;
  // Normal parameters; unset means the generator's default
  // (-0.5, 0.15) for similarities and (0.5, 0.1) for opinions.
  std::optional<double> mean;
  std::optional<double> stddev;

  static DistributionSpec Uniform() { return {}; }
  static DistributionSpec Normal(std::optional<double> mean = std::nullopt,
                                 std::optional<double> stddev = std::nullopt) {
    return {Kind::kNormal, mean, stddev};
  }
};

// Symmetric matrix with off-diagonal entries uniform on [-1, 0] or normal
// clamped to [-1, 0]; zero diagonal. Requires n >= 2.
smodel::SimilarityMatrix GenSimilarityMatrix(std::size_t n,
                                             const DistributionSpec& dist,
                                             std::uint64_t seed);

// n probabilities, uniform on [0, 1] or normal clamped to [0, 1].
tmodel::CandidatePool GenOpinions(std::size_t n, const DistributionSpec& dist,
                                  std::uint64_t seed);

// A demand threshold: either a constant or floor(num * k / den).
struct Threshold {
  long num = 0;
  long den = 1;
  long constant = 0;

  long Resolve(long k) const;
  // Accepts an integer ("3") or a fraction of k ("k/3", "2k/3", "4k/5").
  static Threshold Parse(const std::string& text);
  std::string ToString() const;
};

struct DemandRule {
  Threshold theta1;
  Threshold theta0;
};

enum class Model { kSModel, kTModel };

struct ExperimentConfig {
  Model model = Model::kTModel;
  std::size_t n = 30;
  int trials = 100;
  DistributionSpec distribution;
  std::vector<int> k_values;
  std::vector<DemandRule> demands;  // ignored for the S-model
  std::vector<std::string> methods;
  std::uint64_t seed = 0;
  double exact_budget_s = 500.0;
  std::uint64_t enumeration_guard = kEnumerationGuard;
  tmodel::SaParams sa;
  int threads = 0;  // 0: hardware concurrency

  // Throws InvalidArgument on unknown methods, trials < 1, or empty k list.
  void Validate() const;
};

ExperimentConfig ConfigFromJson(const nlohmann::json& j);

struct TrialRow {
  int trial = 0;
  std::string method;
  int k = 0;
  int theta1 = 0;
  int theta0 = 0;
  double objective = 0.0;   // solver's own score
  double tau_or_div = 0.0;  // exact tau (T-model) or Div (S-model)
  double wall_time_s = 0.0;
  std::string status;  // ok | timeout | skipped | infeasible | error
  std::string note;
};

struct TrialReport {
  std::vector<TrialRow> rows;
};

// Runs every (trial, k, demand, method) cell. Trial t uses data generated
// from MixSeed(seed, t); trials run concurrently and rows come back in
// trial-major, grid order.
TrialReport RunExperiment(const ExperimentConfig& config);

inline constexpr char kCsvHeader[] =
    "trial,method,k,theta1,theta0,objective,tau_or_div,wall_time_s,status";

void WriteCsv(const TrialReport& report, std::ostream& out);

// Per-method and per-(method, k, theta1, theta0) means and standard
// deviations of tau_or_div and wall time over rows with status ok.
nlohmann::json Summarize(const TrialReport& report);

}  // namespace crowdsel::bench

#endif  // CROWDSEL_BENCH_H_
