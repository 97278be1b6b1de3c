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

#include "crowdsel/tmodel.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <string>
#include <utility>

#include "crowdsel/errors.h"
#include "crowdsel/random.h"

namespace crowdsel::tmodel {
namespace {

// Slack on knapsack capacity comparisons; sums of the same probabilities in
// a different order may differ by a few ulps.
constexpr double kCapacitySlack = 1e-12;

double Seconds(Clock::time_point since) {
  return std::chrono::duration<double>(Clock::now() - since).count();
}

void CheckK(const CandidatePool& pool, const pbd::DemandWindow& window) {
  if (static_cast<std::size_t>(window.k()) > pool.size()) {
    throw InvalidArgument("k = " + std::to_string(window.k()) +
                          " exceeds the pool size " +
                          std::to_string(pool.size()));
  }
}

std::vector<double> Gather(const CandidatePool& pool,
                           std::span<const std::size_t> members) {
  std::vector<double> out;
  out.reserve(members.size());
  for (std::size_t m : members) out.push_back(pool.prob(m));
  return out;
}

double SumProbs(const CandidatePool& pool,
                std::span<const std::size_t> members) {
  double s = 0.0;
  for (std::size_t m : members) s += pool.prob(m);
  return s;
}

SelectionResult Finish(const CandidatePool& pool,
                       const pbd::DemandWindow& window,
                       std::vector<std::size_t> members, double objective,
                       Method method, Clock::time_point start) {
  std::sort(members.begin(), members.end());
  SelectionResult out;
  out.ids.reserve(members.size());
  for (std::size_t m : members) out.ids.push_back(pool.id(m));
  out.tau = pbd::TauExact(Gather(pool, members), window);
  out.members = std::move(members);
  out.objective = objective;
  out.method = method;
  out.wall_time_s = Seconds(start);
  return out;
}

std::vector<std::string> SortedIds(const CandidatePool& pool,
                                   std::span<const std::size_t> members) {
  std::vector<std::string> ids;
  ids.reserve(members.size());
  for (std::size_t m : members) ids.push_back(pool.id(m));
  std::sort(ids.begin(), ids.end());
  return ids;
}

// Depth-first branch and bound over items sorted ascending by probability.
// Each node decides the largest remaining item (include first, then
// exclude), mirroring the recursion on the last element of N.
class KnapsackSearch {
 public:
  KnapsackSearch(const CandidatePool& pool, std::size_t k, double capacity)
      : pool_(pool), k_(k), capacity_(capacity), order_(pool.size()) {
    std::iota(order_.begin(), order_.end(), std::size_t{0});
    std::stable_sort(order_.begin(), order_.end(),
                     [&](std::size_t a, std::size_t b) {
                       return pool.prob(a) < pool.prob(b);
                     });
    prefix_.assign(order_.size() + 1, 0.0);
    for (std::size_t i = 0; i < order_.size(); ++i) {
      prefix_[i + 1] = prefix_[i] + pool.prob(order_[i]);
    }
  }

  std::optional<std::vector<std::size_t>> Run() {
    path_.clear();
    Visit(order_.size(), k_, capacity_, 0.0);
    if (!found_) return std::nullopt;
    std::sort(best_.begin(), best_.end());
    return best_;
  }

 private:
  void Record(double total, std::size_t top_from, std::size_t top_to) {
    if (found_ && total <= best_total_) return;
    found_ = true;
    best_total_ = total;
    best_.clear();
    for (std::size_t pos : path_) best_.push_back(order_[pos]);
    for (std::size_t pos = top_from; pos < top_to; ++pos) {
      best_.push_back(order_[pos]);
    }
  }

  // Chooses `need` more items among sorted positions [0, m) with `room`
  // capacity left; `acc` is the probability sum already on the path.
  void Visit(std::size_t m, std::size_t need, double room, double acc) {
    if (need == 0) {
      if (room >= -kCapacitySlack) Record(acc, 0, 0);
      return;
    }
    // The `need` smallest items already overflow.
    if (prefix_[need] > room + kCapacitySlack) return;
    const double largest = prefix_[m] - prefix_[m - need];
    if (largest <= room + kCapacitySlack) {
      Record(acc + largest, m - need, m);
      return;
    }
    // Nothing below this node can beat the incumbent.
    if (found_ && acc + room <= best_total_) return;

    const double p = pool_.prob(order_[m - 1]);
    path_.push_back(m - 1);
    Visit(m - 1, need - 1, room - p, acc + p);
    path_.pop_back();
    if (m - 1 >= need) Visit(m - 1, need, room, acc);
  }

  const CandidatePool& pool_;
  std::size_t k_;
  double capacity_;
  std::vector<std::size_t> order_;
  std::vector<double> prefix_;
  std::vector<std::size_t> path_;
  std::vector<std::size_t> best_;
  double best_total_ = 0.0;
  bool found_ = false;
};

std::vector<std::size_t> Complement(std::size_t n,
                                    std::span<const std::size_t> members) {
  std::vector<bool> in(n, false);
  for (std::size_t m : members) in[m] = true;
  std::vector<std::size_t> out;
  out.reserve(n - members.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (!in[i]) out.push_back(i);
  }
  return out;
}

// Shared pipeline of the Poisson and Binomial solvers. `score` maps a
// subset's probability sum to the surrogate window value.
template <typename Score>
SelectionResult KnapsackPipeline(const CandidatePool& pool,
                                 const pbd::DemandWindow& window, double omega,
                                 Score&& score, Method method,
                                 Clock::time_point start) {
  const std::size_t n = pool.size();
  const std::size_t k = static_cast<std::size_t>(window.k());
  double total = 0.0;
  for (double p : pool.probs()) total += p;

  auto left = BacktrackKnapsack(k, KnapsackTarget{omega}, pool);
  std::optional<std::vector<std::size_t>> right;
  if (auto rest = BacktrackKnapsack(n - k, KnapsackTarget{total - omega},
                                    pool)) {
    right = Complement(n, *rest);
  }
  if (!left && !right) {
    // Unreachable: if no size-k subset fits under omega, the k smallest
    // exceed it, so the n - k largest fit under total - omega.
    throw std::logic_error("both knapsack sides are empty");
  }

  std::vector<std::size_t> chosen;
  double objective;
  if (left && right) {
    const double g_left = score(SumProbs(pool, *left));
    const double g_right = score(SumProbs(pool, *right));
    if (g_left > g_right) {
      chosen = std::move(*left);
      objective = g_left;
    } else {
      chosen = std::move(*right);
      objective = g_right;
    }
  } else {
    chosen = left ? std::move(*left) : std::move(*right);
    objective = score(SumProbs(pool, chosen));
  }
  return Finish(pool, window, std::move(chosen), objective, method, start);
}

}  // namespace

CandidatePool::CandidatePool(std::vector<std::string> ids,
                             std::vector<double> probs)
    : ids_(std::move(ids)), probs_(std::move(probs)) {
  if (ids_.size() != probs_.size()) {
    throw InvalidArgument("pool has " + std::to_string(ids_.size()) +
                          " ids but " + std::to_string(probs_.size()) +
                          " probabilities");
  }
  pbd::ValidateProbabilities(probs_);
  std::set<std::string_view> seen;
  for (const auto& id : ids_) {
    if (!seen.insert(id).second) {
      throw InvalidArgument("duplicate worker id '" + id + "'");
    }
  }
}

CandidatePool CandidatePool::FromProbs(std::vector<double> probs) {
  std::vector<std::string> ids;
  ids.reserve(probs.size());
  for (std::size_t i = 0; i < probs.size(); ++i) {
    ids.push_back(std::to_string(i));
  }
  return CandidatePool(std::move(ids), std::move(probs));
}

std::string_view MethodName(Method method) {
  switch (method) {
    case Method::kExact:
      return "exact";
    case Method::kPoisson:
      return "poisson";
    case Method::kBinomial:
      return "binomial";
    case Method::kNormalSa:
      return "normal-sa";
    case Method::kDftCfSa:
      return "dftcf-sa";
    case Method::kRandom:
      return "random";
  }
  return "unknown";
}

std::optional<Method> ParseMethod(std::string_view name) {
  for (Method m : {Method::kExact, Method::kPoisson, Method::kBinomial,
                   Method::kNormalSa, Method::kDftCfSa, Method::kRandom}) {
    if (MethodName(m) == name) return m;
  }
  return std::nullopt;
}

void SaParams::Validate() const {
  if (!(t_end > 0.0)) throw InvalidArgument("t_end must be positive");
  if (!(t_ini > t_end)) throw InvalidArgument("t_ini must exceed t_end");
  if (r < 0) throw InvalidArgument("r must be non-negative");
  if (!(c > 0.0 && c < 1.0)) {
    throw InvalidArgument("cooling ratio c must lie in (0, 1)");
  }
}

std::optional<std::vector<std::size_t>> BacktrackKnapsack(
    std::size_t k, KnapsackTarget target, const CandidatePool& pool) {
  if (k > pool.size()) {
    throw InvalidArgument("knapsack item count " + std::to_string(k) +
                          " exceeds the pool size " +
                          std::to_string(pool.size()));
  }
  return KnapsackSearch(pool, k, target.omega).Run();
}

SelectionResult ExactSelect(const CandidatePool& pool,
                            const pbd::DemandWindow& window,
                            const Deadline& deadline, std::uint64_t guard) {
  const auto start = Clock::now();
  CheckK(pool, window);
  const std::size_t n = pool.size();
  const std::size_t k = static_cast<std::size_t>(window.k());
  if (ChooseSaturating(n, k) > guard) {
    throw SizeLimitExceeded("C(" + std::to_string(n) + ", " +
                            std::to_string(k) +
                            ") exceeds the enumeration guard");
  }

  const pbd::WindowTau tau(window);
  std::vector<std::size_t> idx(k);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::vector<double> probs(k);
  std::vector<std::size_t> best;
  double best_tau = -1.0;
  std::uint64_t visited = 0;
  while (true) {
    for (std::size_t j = 0; j < k; ++j) probs[j] = pool.prob(idx[j]);
    const double value = tau(probs);
    if (value > best_tau ||
        (value == best_tau && SortedIds(pool, idx) < SortedIds(pool, best))) {
      best_tau = value;
      best = idx;
    }
    if ((++visited & 0x3FF) == 0) CheckDeadline(deadline);

    std::size_t i = k;
    while (i > 0 && idx[i - 1] == n - k + i - 1) --i;
    if (i == 0) break;
    ++idx[i - 1];
    for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
  return Finish(pool, window, std::move(best), best_tau, Method::kExact,
                start);
}

SelectionResult SelectPoisson(const CandidatePool& pool,
                              const pbd::DemandWindow& window) {
  const auto start = Clock::now();
  CheckK(pool, window);
  if (window.degenerate()) {
    // Target the Poisson mode and score by the point mass at theta1.
    const int t = window.theta1();
    auto score = [t](double lambda) {
      if (lambda <= 0.0) return t == 0 ? 1.0 : 0.0;
      return std::exp(-lambda + t * std::log(lambda) - std::lgamma(t + 1.0));
    };
    return KnapsackPipeline(pool, window, static_cast<double>(t), score,
                            Method::kPoisson, start);
  }
  auto score = [&](double lambda) {
    return pbd::GPoisson(std::max(lambda, 0.0), window);
  };
  return KnapsackPipeline(pool, window, pbd::PeakPoisson(window), score,
                          Method::kPoisson, start);
}

SelectionResult SelectBinomial(const CandidatePool& pool,
                               const pbd::DemandWindow& window) {
  const auto start = Clock::now();
  CheckK(pool, window);
  const int k = window.k();
  auto p_bar = [k](double lambda) {
    return std::clamp(lambda / k, 0.0, 1.0);
  };
  if (window.degenerate()) {
    const int t = window.theta1();
    // Point mass of Binomial(k, p_bar) at theta1.
    auto score = [&, t](double lambda) {
      const double p = p_bar(lambda);
      if (p <= 0.0) return t == 0 ? 1.0 : 0.0;
      if (p >= 1.0) return t == k ? 1.0 : 0.0;
      return std::exp(std::lgamma(k + 1.0) - std::lgamma(t + 1.0) -
                      std::lgamma(k - t + 1.0) + t * std::log(p) +
                      (k - t) * std::log1p(-p));
    };
    return KnapsackPipeline(pool, window, static_cast<double>(t), score,
                            Method::kBinomial, start);
  }
  auto score = [&](double lambda) {
    return pbd::GBinomial(p_bar(lambda), k, window);
  };
  return KnapsackPipeline(pool, window, pbd::PeakBinomial(k, window).omega,
                          score, Method::kBinomial, start);
}

SelectionResult SaSelect(const CandidatePool& pool,
                         const pbd::DemandWindow& window,
                         SaObjective objective, const SaParams& params) {
  const auto start = Clock::now();
  CheckK(pool, window);
  params.Validate();
  const Method method = objective == SaObjective::kNormal ? Method::kNormalSa
                                                          : Method::kDftCfSa;
  const std::size_t n = pool.size();
  const std::size_t k = static_cast<std::size_t>(window.k());

  const pbd::WindowTau window_tau(window);
  std::vector<double> buffer(k);
  auto evaluate = [&](std::span<const std::size_t> members) {
    for (std::size_t j = 0; j < k; ++j) buffer[j] = pool.prob(members[j]);
    if (objective == SaObjective::kNormal) {
      return pbd::GNormal(pbd::ComputeStats(buffer), window);
    }
    return window_tau(buffer);
  };

  Rng rng(params.seed);
  std::vector<std::size_t> current = SampleSubset(rng, n, k);
  double value = evaluate(current);
  if (n == k) {
    return Finish(pool, window, std::move(current), value, method, start);
  }
  std::vector<std::size_t> rest = Complement(n, current);

  const double half_k = static_cast<double>(k) / 2.0;
  const double half_rest = static_cast<double>(n - k) / 2.0;
  const std::int64_t k1_max = std::max<std::int64_t>(
      1, static_cast<std::int64_t>(std::floor(std::min(half_k, half_rest))));

  for (double temp = params.t_ini; temp > params.t_end; temp *= params.c) {
    for (int step = 0; step < params.r; ++step) {
      const auto k1 = static_cast<std::size_t>(UniformInt(rng, 1, k1_max));
      // The first k1 slots of each side are the ones exchanged.
      PartialShuffle(rng, current, k1);
      PartialShuffle(rng, rest, k1);
      for (std::size_t j = 0; j < k1; ++j) std::swap(current[j], rest[j]);

      const double candidate = evaluate(current);
      const double delta = candidate - value;
      if (delta >= 0.0 || Uniform01(rng) < std::exp(delta / temp)) {
        value = candidate;
      } else {
        for (std::size_t j = 0; j < k1; ++j) std::swap(current[j], rest[j]);
      }
    }
  }
  return Finish(pool, window, std::move(current), value, method, start);
}

SelectionResult RandomSelect(const CandidatePool& pool,
                             const pbd::DemandWindow& window,
                             std::uint64_t seed) {
  const auto start = Clock::now();
  CheckK(pool, window);
  Rng rng(seed);
  auto members =
      SampleSubset(rng, pool.size(), static_cast<std::size_t>(window.k()));
  const double tau = pbd::TauExact(Gather(pool, members), window);
  return Finish(pool, window, std::move(members), tau, Method::kRandom, start);
}

}  // namespace crowdsel::tmodel
