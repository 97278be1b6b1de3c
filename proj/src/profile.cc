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

#include "crowdsel/profile.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <string>
#include <unordered_map>
#include <utility>

#include "crowdsel/errors.h"
#include "crowdsel/random.h"

namespace crowdsel::profile {
namespace {

constexpr double kKlSmoothing = 1e-10;
constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double LogSumExp(std::span<const double> xs) {
  const double top = *std::max_element(xs.begin(), xs.end());
  if (top == kNegInf) return kNegInf;
  double s = 0.0;
  for (double x : xs) s += std::exp(x - top);
  return top + std::log(s);
}

// Sparse word counts indexed into the model vocabulary.
using SparseBag = std::vector<std::pair<std::size_t, double>>;

SparseBag ToSparse(const Experience& e,
                   const std::unordered_map<std::string, std::size_t>& index) {
  SparseBag bag;
  for (const auto& [word, count] : e.counts()) {
    auto it = index.find(word);
    if (it != index.end()) bag.emplace_back(it->second, count);
  }
  return bag;
}

// log pi_k + sum_j n_j log mu_kj for every topic k.
void TopicLogWeights(const SparseBag& bag, const std::vector<double>& log_pi,
                     const std::vector<std::vector<double>>& log_mu,
                     std::vector<double>& out) {
  out.resize(log_pi.size());
  for (std::size_t k = 0; k < log_pi.size(); ++k) {
    double acc = log_pi[k];
    if (acc != kNegInf) {
      for (const auto& [j, n] : bag) acc += n * log_mu[k][j];
    }
    out[k] = acc;
  }
}

std::vector<double> Smoothed(std::span<const double> v) {
  std::vector<double> out(v.begin(), v.end());
  const double norm = 1.0 + kKlSmoothing * static_cast<double>(v.size());
  for (double& x : out) x = (x + kKlSmoothing) / norm;
  return out;
}

void CheckDistribution(std::span<const double> v, const char* name) {
  double s = 0.0;
  for (double x : v) {
    if (!(x >= 0.0)) {
      throw InvalidArgument(std::string(name) + " has a negative entry");
    }
    s += x;
  }
  if (std::abs(s - 1.0) > 1e-6) {
    throw InvalidArgument(std::string(name) + " sums to " + std::to_string(s) +
                          ", not 1");
  }
}

}  // namespace

std::vector<std::string> Tokenize(std::string_view text, const Stemmer& stem) {
  std::vector<std::string> tokens;
  std::string cur;
  auto flush = [&] {
    if (cur.empty()) return;
    tokens.push_back(stem ? stem(std::move(cur)) : std::move(cur));
    cur.clear();
  };
  for (char ch : text) {
    const auto uch = static_cast<unsigned char>(ch);
    if (std::isalnum(uch)) {
      cur.push_back(static_cast<char>(std::tolower(uch)));
    } else {
      flush();
    }
  }
  flush();
  return tokens;
}

void Experience::Add(const std::string& word, long count) {
  if (count < 0) throw InvalidArgument("word counts must be non-negative");
  if (word.empty()) throw InvalidArgument("empty word");
  if (count == 0) return;
  counts_[word] += count;
  total_ += count;
}

void Experience::AddText(std::string_view text, const Stemmer& stem) {
  for (const auto& token : Tokenize(text, stem)) Add(token);
}

double JaccardSimilarity(const FeatureSet& a, const FeatureSet& b) {
  std::size_t shared = 0;
  for (const auto& f : a) shared += b.count(f);
  const std::size_t united = a.size() + b.size() - shared;
  if (united == 0) return 0.0;
  return static_cast<double>(shared) / static_cast<double>(united);
}

double RelevanceDistance(const FeatureSet& worker, const FeatureSet& task) {
  return 1.0 - JaccardSimilarity(worker, task);
}

double Relevance(const FeatureSet& worker, const FeatureSet& task,
                 double sentinel) {
  const double d = RelevanceDistance(worker, task);
  return d == 0.0 ? sentinel : 1.0 / d;
}

std::vector<WorkerProfile> RelevantWorkers(
    const FeatureSet& task, const std::vector<WorkerProfile>& pool,
    double radius) {
  if (!(radius >= 0.0)) throw InvalidArgument("radius must be non-negative");
  std::vector<WorkerProfile> out;
  for (const auto& w : pool) {
    if (RelevanceDistance(w.features, task) <= radius) out.push_back(w);
  }
  return out;
}

TopicModel EmFit(const std::vector<Experience>& collections,
                 const EmOptions& options) {
  if (options.topics < 1) throw InvalidArgument("topic count must be >= 1");
  if (collections.empty()) throw InvalidArgument("corpus is empty");
  for (std::size_t i = 0; i < collections.size(); ++i) {
    if (collections[i].empty()) {
      throw InvalidArgument("collection " + std::to_string(i) + " is empty");
    }
  }
  if (!(options.smoothing >= 0.0)) {
    throw InvalidArgument("smoothing must be non-negative");
  }

  TopicModel model;
  std::set<std::string> words;
  for (const auto& c : collections) {
    for (const auto& [w, n] : c.counts()) words.insert(w);
  }
  model.vocab.assign(words.begin(), words.end());
  std::unordered_map<std::string, std::size_t> index;
  for (std::size_t j = 0; j < model.vocab.size(); ++j) {
    index.emplace(model.vocab[j], j);
  }
  std::vector<SparseBag> bags;
  bags.reserve(collections.size());
  for (const auto& c : collections) bags.push_back(ToSparse(c, index));

  const std::size_t num_topics = static_cast<std::size_t>(options.topics);
  const std::size_t vocab_size = model.vocab.size();
  const std::size_t num_docs = bags.size();
  const double eps = options.smoothing;

  // pi uniform; each mu row a Dirichlet(1, ..., 1) draw.
  Rng rng(options.seed);
  model.pi.assign(num_topics, 1.0 / num_topics);
  model.mu.assign(num_topics, std::vector<double>(vocab_size));
  for (auto& row : model.mu) {
    double s = 0.0;
    for (double& x : row) {
      double u = Uniform01(rng);
      while (u <= 0.0) u = Uniform01(rng);
      x = -std::log(u);
      s += x;
    }
    for (double& x : row) x /= s;
  }

  std::vector<double> log_pi(num_topics);
  std::vector<std::vector<double>> log_mu(num_topics,
                                          std::vector<double>(vocab_size));
  std::vector<std::vector<double>> resp(num_docs,
                                        std::vector<double>(num_topics));
  std::vector<double> weights;

  // E-step against the current model; returns the traced objective.
  auto expectation = [&] {
    for (std::size_t k = 0; k < num_topics; ++k) {
      log_pi[k] = model.pi[k] > 0.0 ? std::log(model.pi[k]) : kNegInf;
      for (std::size_t j = 0; j < vocab_size; ++j) {
        log_mu[k][j] = std::log(model.mu[k][j]);
      }
    }
    double objective = 0.0;
    for (std::size_t i = 0; i < num_docs; ++i) {
      TopicLogWeights(bags[i], log_pi, log_mu, weights);
      const double norm = LogSumExp(weights);
      objective += norm;
      for (std::size_t k = 0; k < num_topics; ++k) {
        resp[i][k] = std::exp(weights[k] - norm);
      }
    }
    if (eps > 0.0) {
      for (const auto& row : log_mu) {
        for (double lm : row) objective += eps * lm;
      }
    }
    return objective;
  };

  double objective = expectation();
  model.log_likelihood_trace.push_back(objective);
  if (options.on_iteration) options.on_iteration(model);

  for (int iter = 0; iter < options.max_iter; ++iter) {
    // M-step.
    for (std::size_t k = 0; k < num_topics; ++k) {
      double mass = 0.0;
      for (std::size_t i = 0; i < num_docs; ++i) mass += resp[i][k];
      model.pi[k] = mass / static_cast<double>(num_docs);

      auto& row = model.mu[k];
      std::fill(row.begin(), row.end(), eps);
      for (std::size_t i = 0; i < num_docs; ++i) {
        const double h = resp[i][k];
        if (h == 0.0) continue;
        for (const auto& [j, n] : bags[i]) row[j] += h * n;
      }
      double total = 0.0;
      for (double x : row) total += x;
      if (total > 0.0) {
        for (double& x : row) x /= total;
      } else {
        // A topic with no responsibility and no smoothing: fall back to
        // uniform so log mu stays finite.
        std::fill(row.begin(), row.end(), 1.0 / vocab_size);
      }
    }
    double pi_total = 0.0;
    for (double p : model.pi) pi_total += p;
    for (double& p : model.pi) p /= pi_total;

    const double next = expectation();
    model.log_likelihood_trace.push_back(next);
    if (options.on_iteration) options.on_iteration(model);
    const bool converged = std::abs(next - objective) < options.tol;
    objective = next;
    if (converged) break;
  }
  return model;
}

std::vector<double> TopicPosterior(const Experience& experience,
                                   const TopicModel& model) {
  std::unordered_map<std::string, std::size_t> index;
  for (std::size_t j = 0; j < model.vocab.size(); ++j) {
    index.emplace(model.vocab[j], j);
  }
  const SparseBag bag = ToSparse(experience, index);
  const std::size_t num_topics = model.topics();
  std::vector<double> log_pi(num_topics);
  std::vector<std::vector<double>> log_mu(num_topics);
  for (std::size_t k = 0; k < num_topics; ++k) {
    log_pi[k] = model.pi[k] > 0.0 ? std::log(model.pi[k]) : kNegInf;
    log_mu[k].resize(model.vocab.size());
    for (std::size_t j = 0; j < model.vocab.size(); ++j) {
      log_mu[k][j] = std::log(model.mu[k][j]);
    }
  }
  std::vector<double> weights;
  TopicLogWeights(bag, log_pi, log_mu, weights);
  const double norm = LogSumExp(weights);
  std::vector<double> h(num_topics);
  for (std::size_t k = 0; k < num_topics; ++k) {
    h[k] = std::exp(weights[k] - norm);
  }
  return h;
}

double KlDistance(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    throw InvalidArgument("KL arguments differ in length");
  }
  CheckDistribution(a, "first distribution");
  CheckDistribution(b, "second distribution");
  const auto sa = Smoothed(a);
  const auto sb = Smoothed(b);
  double d = 0.0;
  for (std::size_t i = 0; i < sa.size(); ++i) {
    d += sa[i] * std::log(sa[i] / sb[i]);
  }
  return std::max(d, 0.0);
}

smodel::SimilarityMatrix ExperienceSimilarityMatrix(
    const std::vector<Experience>& workers, const TopicModel& model) {
  const std::size_t n = workers.size();
  if (n < 2) throw InvalidArgument("need at least two workers");
  std::vector<std::vector<double>> post;
  post.reserve(n);
  for (const auto& w : workers) post.push_back(TopicPosterior(w, model));

  std::vector<double> sim(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double d =
          0.5 * (KlDistance(post[i], post[j]) + KlDistance(post[j], post[i]));
      sim[i * n + j] = sim[j * n + i] = -d;
    }
  }
  return smodel::SimilarityMatrix(n, std::move(sim));
}

}  // namespace crowdsel::profile
