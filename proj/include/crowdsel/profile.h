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

// Worker similarity from profiles and task history.
//
// Two measures feed the similarity-driven selector: Jaccard overlap of
// profile features, and a topic distance. For the latter every worker's
// experience (the words of all their task records) is treated as one bag of
// words, a mixture of K multinomial topics is fitted by EM, and workers are
// compared through the KL divergence of their topic posteriors.

#ifndef CROWDSEL_PROFILE_H_
#define CROWDSEL_PROFILE_H_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "crowdsel/smodel.h"

namespace crowdsel::profile {

using FeatureSet = std::set<std::string>;

struct WorkerProfile {
  std::string id;
  FeatureSet features;
};

// One worker's record on one task.
struct TaskRecord {
  std::string task_id;
  std::string worker_id;
  FeatureSet features;
};

// Identity by default. Plug a stemmer in here; none ships with the library.
using Stemmer = std::function<std::string(std::string)>;

// Lowercases and splits on anything that is not an ASCII letter or digit.
std::vector<std::string> Tokenize(std::string_view text,
                                  const Stemmer& stem = {});

// Bag of words.
class Experience {
 public:
  void Add(const std::string& word, long count = 1);
  void AddText(std::string_view text, const Stemmer& stem = {});

  const std::map<std::string, long>& counts() const { return counts_; }
  long total() const { return total_; }
  bool empty() const { return total_ == 0; }

 private:
  std::map<std::string, long> counts_;
  long total_ = 0;
};

// |a & b| / |a | b|; 0 when both are empty.
double JaccardSimilarity(const FeatureSet& a, const FeatureSet& b);

inline constexpr double kRelevanceSentinel = 1e12;

// 1 - Jaccard.
double RelevanceDistance(const FeatureSet& worker, const FeatureSet& task);

// 1 / RelevanceDistance, or `sentinel` when the distance is zero.
double Relevance(const FeatureSet& worker, const FeatureSet& task,
                 double sentinel = kRelevanceSentinel);

// Workers whose relevance distance to the task is at most `radius`, in
// input order.
std::vector<WorkerProfile> RelevantWorkers(
    const FeatureSet& task, const std::vector<WorkerProfile>& pool,
    double radius);

// Multinomial mixture over a fixed vocabulary.
struct TopicModel {
  std::vector<double> pi;               // K topic priors
  std::vector<std::vector<double>> mu;  // K x M word probabilities
  std::vector<std::string> vocab;       // M words, sorted
  // Objective after initialization and after every EM iteration.
  std::vector<double> log_likelihood_trace;

  std::size_t topics() const { return pi.size(); }
};

struct EmOptions {
  int topics = 2;
  double tol = 1e-8;
  int max_iter = 500;
  std::uint64_t seed = 0;
  // Pseudo-count added to every expected word count in the M-step.
  double smoothing = 1e-10;
  // Called with the model after initialization and after each iteration.
  std::function<void(const TopicModel&)> on_iteration;
};

// Fits the mixture by EM. The traced objective is the log-likelihood plus
// the smoothing term `smoothing * sum log mu`, which EM never decreases.
// Throws InvalidArgument for an empty corpus, an empty collection, or
// topics < 1.
TopicModel EmFit(const std::vector<Experience>& collections,
                 const EmOptions& options);

// Posterior topic distribution of one bag of words; words outside the
// model vocabulary are ignored.
std::vector<double> TopicPosterior(const Experience& experience,
                                   const TopicModel& model);

// KL(a || b) in nats after adding 1e-10 to every entry and renormalizing.
// Throws InvalidArgument if the sizes differ, an entry is negative, or a
// vector does not sum to 1 within 1e-6.
double KlDistance(std::span<const double> a, std::span<const double> b);

// Sim(i, j) = -(KL(i || j) + KL(j || i)) / 2 over topic posteriors, with a
// zero diagonal. Requires at least two workers.
smodel::SimilarityMatrix ExperienceSimilarityMatrix(
    const std::vector<Experience>& workers, const TopicModel& model);

}  // namespace crowdsel::profile

#endif  // CROWDSEL_PROFILE_H_
