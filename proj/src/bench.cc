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

#include "crowdsel/bench.h"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <map>
#include <ostream>
#include <regex>
#include <thread>
#include <tuple>
#include <utility>

#include "crowdsel/errors.h"
#include "crowdsel/random.h"

namespace crowdsel::bench {
namespace {

constexpr double kSimNormalMean = -0.5;
constexpr double kSimNormalStd = 0.15;
constexpr double kOpinionNormalMean = 0.5;
constexpr double kOpinionNormalStd = 0.1;

double Draw(Rng& rng, const DistributionSpec& dist, double lo, double hi,
            double default_mean, double default_std) {
  if (dist.kind == DistributionSpec::Kind::kUniform) {
    return lo + (hi - lo) * Uniform01(rng);
  }
  const double mean = dist.mean.value_or(default_mean);
  const double std = dist.stddev.value_or(default_std);
  return std::clamp(mean + std * StandardNormal(rng), lo, hi);
}

std::string FormatDouble(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

double Seconds(Clock::time_point since) {
  return std::chrono::duration<double>(Clock::now() - since).count();
}

bool IsSModelMethod(const std::string& m) {
  return m == "exact" || m == "greedy" || m == "random";
}

std::vector<TrialRow> RunSModelTrial(const ExperimentConfig& cfg, int trial) {
  const std::uint64_t trial_seed = MixSeed(cfg.seed, trial);
  const auto sim = GenSimilarityMatrix(cfg.n, cfg.distribution, trial_seed);
  std::vector<TrialRow> rows;
  for (std::size_t ki = 0; ki < cfg.k_values.size(); ++ki) {
    const int k = cfg.k_values[ki];
    for (std::size_t mi = 0; mi < cfg.methods.size(); ++mi) {
      const std::string& method = cfg.methods[mi];
      TrialRow row;
      row.trial = trial;
      row.method = method;
      row.k = k;
      const std::size_t kk = static_cast<std::size_t>(k);
      const int min_k = method == "greedy" ? 2 : 1;
      if (k < min_k || kk > cfg.n) {
        row.status = "infeasible";
        row.note = "k outside the feasible range for " + method;
        rows.push_back(std::move(row));
        continue;
      }
      if (method == "exact" &&
          ChooseSaturating(cfg.n, kk) > cfg.enumeration_guard) {
        row.status = "skipped";
        row.note = "enumeration guard";
        rows.push_back(std::move(row));
        continue;
      }
      const auto start = Clock::now();
      try {
        smodel::Crowd crowd;
        if (method == "exact") {
          const auto budget = std::chrono::duration_cast<Clock::duration>(
              std::chrono::duration<double>(cfg.exact_budget_s));
          crowd = smodel::ExactSelect(sim, kk, start + budget,
                                      cfg.enumeration_guard);
        } else if (method == "greedy") {
          crowd = smodel::GreedySelect(sim, kk);
        } else {
          crowd = smodel::RandomSelect(
              cfg.n, kk, MixSeed(trial_seed, ki * 64 + mi + 1));
        }
        row.wall_time_s = Seconds(start);
        row.objective = row.tau_or_div = smodel::Diversity(crowd, sim);
        row.status = "ok";
      } catch (const Timeout& e) {
        row.wall_time_s = Seconds(start);
        row.status = "timeout";
        row.note = e.what();
      } catch (const std::exception& e) {
        row.wall_time_s = Seconds(start);
        row.status = "error";
        row.note = e.what();
      }
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

std::vector<TrialRow> RunTModelTrial(const ExperimentConfig& cfg, int trial) {
  const std::uint64_t trial_seed = MixSeed(cfg.seed, trial);
  const auto pool = GenOpinions(cfg.n, cfg.distribution, trial_seed);
  std::vector<TrialRow> rows;
  std::size_t cell = 0;
  for (const int k : cfg.k_values) {
    for (const auto& rule : cfg.demands) {
      const int t1 = static_cast<int>(rule.theta1.Resolve(k));
      const int t0 = static_cast<int>(rule.theta0.Resolve(k));
      ++cell;
      for (std::size_t mi = 0; mi < cfg.methods.size(); ++mi) {
        const std::string& name = cfg.methods[mi];
        TrialRow row;
        row.trial = trial;
        row.method = name;
        row.k = k;
        row.theta1 = t1;
        row.theta0 = t0;
        if (k < 1 || t1 + t0 > k || static_cast<std::size_t>(k) > cfg.n) {
          row.status = "infeasible";
          row.note = "theta1 + theta0 > k or k outside [1, n]";
          rows.push_back(std::move(row));
          continue;
        }
        const pbd::DemandWindow window(k, t1, t0);
        const auto method = *tmodel::ParseMethod(name);
        if (method == tmodel::Method::kExact &&
            ChooseSaturating(cfg.n, static_cast<std::size_t>(k)) >
                cfg.enumeration_guard) {
          row.status = "skipped";
          row.note = "enumeration guard";
          rows.push_back(std::move(row));
          continue;
        }
        const std::uint64_t method_seed = MixSeed(trial_seed, cell * 64 + mi);
        const auto start = Clock::now();
        try {
          tmodel::SelectionResult result;
          switch (method) {
            case tmodel::Method::kExact: {
              const auto budget = std::chrono::duration_cast<Clock::duration>(
                  std::chrono::duration<double>(cfg.exact_budget_s));
              result = tmodel::ExactSelect(pool, window, start + budget,
                                           cfg.enumeration_guard);
              break;
            }
            case tmodel::Method::kPoisson:
              result = tmodel::SelectPoisson(pool, window);
              break;
            case tmodel::Method::kBinomial:
              result = tmodel::SelectBinomial(pool, window);
              break;
            case tmodel::Method::kNormalSa:
            case tmodel::Method::kDftCfSa: {
              tmodel::SaParams sa = cfg.sa;
              sa.seed = method_seed;
              result = tmodel::SaSelect(
                  pool, window,
                  method == tmodel::Method::kNormalSa
                      ? tmodel::SaObjective::kNormal
                      : tmodel::SaObjective::kDftCf,
                  sa);
              break;
            }
            case tmodel::Method::kRandom:
              result = tmodel::RandomSelect(pool, window, method_seed);
              break;
          }
          row.wall_time_s = result.wall_time_s;
          row.objective = result.objective;
          row.tau_or_div = result.tau;
          row.status = "ok";
        } catch (const Timeout& e) {
          row.wall_time_s = Seconds(start);
          row.status = "timeout";
          row.note = e.what();
        } catch (const std::exception& e) {
          row.wall_time_s = Seconds(start);
          row.status = "error";
          row.note = e.what();
        }
        rows.push_back(std::move(row));
      }
    }
  }
  return rows;
}

struct Moments {
  std::size_t n = 0;
  double sum = 0.0;
  double sum_sq = 0.0;
  double time = 0.0;

  void Add(const TrialRow& r) {
    ++n;
    sum += r.tau_or_div;
    sum_sq += r.tau_or_div * r.tau_or_div;
    time += r.wall_time_s;
  }
  nlohmann::json ToJson() const {
    const double mean = n ? sum / n : 0.0;
    const double var =
        n > 1 ? std::max(0.0, (sum_sq - n * mean * mean) / (n - 1)) : 0.0;
    return {{"n_ok", n},
            {"mean", mean},
            {"stddev", std::sqrt(var)},
            {"mean_wall_time_s", n ? time / n : 0.0}};
  }
};

}  // namespace

smodel::SimilarityMatrix GenSimilarityMatrix(std::size_t n,
                                             const DistributionSpec& dist,
                                             std::uint64_t seed) {
  if (n < 2) throw InvalidArgument("similarity matrix needs n >= 2");
  Rng rng(seed);
  std::vector<double> sim(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      sim[i * n + j] = sim[j * n + i] =
          Draw(rng, dist, -1.0, 0.0, kSimNormalMean, kSimNormalStd);
    }
  }
  return smodel::SimilarityMatrix(n, std::move(sim));
}

tmodel::CandidatePool GenOpinions(std::size_t n, const DistributionSpec& dist,
                                  std::uint64_t seed) {
  if (n < 1) throw InvalidArgument("opinion pool needs n >= 1");
  Rng rng(seed);
  std::vector<double> probs(n);
  for (double& p : probs) {
    p = Draw(rng, dist, 0.0, 1.0, kOpinionNormalMean, kOpinionNormalStd);
  }
  return tmodel::CandidatePool::FromProbs(std::move(probs));
}

long Threshold::Resolve(long k) const {
  if (num == 0) return std::max(0L, constant);
  // Floor division for non-negative operands.
  return std::max(0L, num * k / den + constant);
}

Threshold Threshold::Parse(const std::string& text) {
  static const std::regex kInteger(R"(\s*(\d+)\s*)");
  static const std::regex kFraction(R"(\s*(\d*)\s*k\s*(?:/\s*(\d+))?\s*)");
  std::smatch m;
  Threshold t;
  if (std::regex_match(text, m, kInteger)) {
    t.constant = std::stol(m[1]);
    return t;
  }
  if (std::regex_match(text, m, kFraction)) {
    t.num = m[1].length() ? std::stol(m[1]) : 1;
    t.den = m[2].matched ? std::stol(m[2]) : 1;
    if (t.den == 0) throw InvalidArgument("zero denominator in '" + text + "'");
    return t;
  }
  throw InvalidArgument("cannot parse threshold '" + text +
                        "'; expected an integer or a form like 2k/3");
}

std::string Threshold::ToString() const {
  if (num == 0) return std::to_string(constant);
  std::string s = (num == 1 ? "" : std::to_string(num)) + "k";
  if (den != 1) s += "/" + std::to_string(den);
  return s;
}

void ExperimentConfig::Validate() const {
  if (trials < 1) throw InvalidArgument("trials must be at least 1");
  if (k_values.empty()) throw InvalidArgument("k list is empty");
  if (n < 1) throw InvalidArgument("pool size must be positive");
  for (const auto& m : methods) {
    const bool known = model == Model::kSModel
                           ? IsSModelMethod(m)
                           : tmodel::ParseMethod(m).has_value();
    if (!known) throw InvalidArgument("unknown method '" + m + "'");
  }
  if (model == Model::kTModel) {
    if (demands.empty()) throw InvalidArgument("demand grid is empty");
    sa.Validate();
  }
  if (!(exact_budget_s > 0.0)) {
    throw InvalidArgument("exact_budget_s must be positive");
  }
}

ExperimentConfig ConfigFromJson(const nlohmann::json& j) {
  ExperimentConfig cfg;
  try {
    const std::string model = j.at("model").get<std::string>();
    if (model == "smodel") {
      cfg.model = Model::kSModel;
    } else if (model == "tmodel") {
      cfg.model = Model::kTModel;
    } else {
      throw InvalidArgument("model must be 'smodel' or 'tmodel'");
    }
    cfg.n = j.at("n").get<std::size_t>();
    cfg.trials = j.value("trials", cfg.trials);
    cfg.seed = j.value("seed", cfg.seed);
    cfg.k_values = j.at("k").get<std::vector<int>>();
    cfg.methods = j.at("methods").get<std::vector<std::string>>();
    cfg.exact_budget_s = j.value("exact_budget_s", cfg.exact_budget_s);
    cfg.enumeration_guard =
        j.value("enumeration_guard", cfg.enumeration_guard);
    cfg.threads = j.value("threads", cfg.threads);

    if (j.contains("distribution")) {
      const auto& d = j.at("distribution");
      const std::string kind = d.is_string() ? d.get<std::string>()
                                             : d.at("kind").get<std::string>();
      if (kind == "uniform") {
        cfg.distribution = DistributionSpec::Uniform();
      } else if (kind == "normal") {
        cfg.distribution = DistributionSpec::Normal();
        if (d.is_object() && d.contains("mean")) {
          cfg.distribution.mean = d.at("mean").get<double>();
        }
        if (d.is_object() && d.contains("stddev")) {
          cfg.distribution.stddev = d.at("stddev").get<double>();
        }
      } else {
        throw InvalidArgument("distribution must be 'uniform' or 'normal'");
      }
    }
    if (j.contains("demands")) {
      for (const auto& d : j.at("demands")) {
        auto parse = [](const nlohmann::json& v) {
          return v.is_number_integer()
                     ? Threshold{0, 1, v.get<long>()}
                     : Threshold::Parse(v.get<std::string>());
        };
        cfg.demands.push_back({parse(d.at("theta1")), parse(d.at("theta0"))});
      }
    }
    if (j.contains("sa")) {
      const auto& s = j.at("sa");
      cfg.sa.t_ini = s.value("t_ini", cfg.sa.t_ini);
      cfg.sa.t_end = s.value("t_end", cfg.sa.t_end);
      cfg.sa.r = s.value("r", cfg.sa.r);
      cfg.sa.c = s.value("c", cfg.sa.c);
    }
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("bad experiment config: ") + e.what());
  }
  cfg.Validate();
  return cfg;
}

TrialReport RunExperiment(const ExperimentConfig& config) {
  config.Validate();
  TrialReport report;
  if (config.methods.empty()) return report;

  std::vector<std::vector<TrialRow>> per_trial(config.trials);
  std::atomic<int> next{0};
  auto worker = [&] {
    for (int t = next++; t < config.trials; t = next++) {
      per_trial[t] = config.model == Model::kSModel
                         ? RunSModelTrial(config, t)
                         : RunTModelTrial(config, t);
    }
  };
  int threads = config.threads > 0
                    ? config.threads
                    : static_cast<int>(std::thread::hardware_concurrency());
  threads = std::clamp(threads, 1, config.trials);
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int i = 0; i < threads; ++i) pool.emplace_back(worker);
  }

  for (auto& rows : per_trial) {
    for (auto& r : rows) report.rows.push_back(std::move(r));
  }
  return report;
}

void WriteCsv(const TrialReport& report, std::ostream& out) {
  out << kCsvHeader << '\n';
  for (const auto& r : report.rows) {
    out << r.trial << ',' << r.method << ',' << r.k << ',' << r.theta1 << ','
        << r.theta0 << ',' << FormatDouble(r.objective) << ','
        << FormatDouble(r.tau_or_div) << ',' << FormatDouble(r.wall_time_s)
        << ',' << r.status << '\n';
  }
}

nlohmann::json Summarize(const TrialReport& report) {
  std::map<std::string, Moments> by_method;
  std::map<std::tuple<std::string, int, int, int>, Moments> by_cell;
  std::map<std::string, std::size_t> non_ok;
  for (const auto& r : report.rows) {
    if (r.status != "ok") {
      ++non_ok[r.status];
      continue;
    }
    by_method[r.method].Add(r);
    by_cell[{r.method, r.k, r.theta1, r.theta0}].Add(r);
  }
  nlohmann::json methods = nlohmann::json::object();
  for (const auto& [name, m] : by_method) methods[name] = m.ToJson();
  nlohmann::json cells = nlohmann::json::array();
  for (const auto& [key, m] : by_cell) {
    auto j = m.ToJson();
    j["method"] = std::get<0>(key);
    j["k"] = std::get<1>(key);
    j["theta1"] = std::get<2>(key);
    j["theta0"] = std::get<3>(key);
    cells.push_back(std::move(j));
  }
  return {{"rows", report.rows.size()},
          {"non_ok", non_ok},
          {"methods", methods},
          {"cells", cells}};
}

}  // namespace crowdsel::bench
