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

#include "crowdsel/cli.h"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "crowdsel/bench.h"
#include "crowdsel/errors.h"
#include "crowdsel/io.h"
#include "crowdsel/pbd.h"
#include "crowdsel/profile.h"
#include "crowdsel/smodel.h"
#include "crowdsel/tmodel.h"
#include "json.hpp"

namespace crowdsel::cli {
namespace {

using nlohmann::json;

enum class Action {
  kNone,
  kPbdPmf,
  kPbdTau,
  kSelectS,
  kSelectT,
  kBenchRun,
  kProfileFit,
  kProfileSimilarity,
};

struct Options {
  Action action = Action::kNone;
  std::string probs;
  std::string matrix_path;
  std::string pool_path;
  std::string corpus_path;
  std::string model_path;
  std::string config_path;
  std::string out_path;
  std::string format = "json";
  std::string bench_format = "csv";
  std::string method;
  std::string pmf_method = "dftcf";
  int k = 0;
  int theta1 = 0;
  int theta0 = 0;
  std::uint64_t seed = 0;
  bool seed_given = false;
  double budget_s = 500.0;
  tmodel::SaParams sa;
  int topics = 2;
  int max_iter = 500;
  double tol = 1e-8;
  int threads = 0;
};

// Scalars are printed at 15 significant digits so that sums such as
// 0.9376 do not surface as 0.93759999999999999.
double Round15(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.15g", x);
  return std::strtod(buf, nullptr);
}

json RoundAll(json j) {
  if (j.is_number_float()) return Round15(j.get<double>());
  if (j.is_array() || j.is_object()) {
    for (auto& v : j) v = RoundAll(v);
  }
  return j;
}

std::string FormatNumber(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.15g", x);
  return buf;
}

std::vector<double> ParseList(const std::string& text) {
  std::vector<double> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto comma = text.find(',', start);
    if (comma == std::string::npos) comma = text.size();
    const std::string field = text.substr(start, comma - start);
    double v = 0.0;
    auto [ptr, ec] =
        std::from_chars(field.data(), field.data() + field.size(), v);
    if (field.empty() || ec != std::errc() ||
        ptr != field.data() + field.size()) {
      throw InvalidArgument("--probs: '" + field + "' is not a number");
    }
    out.push_back(v);
    start = comma + 1;
  }
  return out;
}

class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) : out_(&fallback) {
    if (path.empty()) return;
    file_.open(path);
    if (!file_) throw std::runtime_error("cannot write '" + path + "'");
    out_ = &file_;
  }
  std::ostream& stream() { return *out_; }

 private:
  std::ofstream file_;
  std::ostream* out_;
};

void EmitJson(const json& j, const Options& opt, std::ostream& out) {
  Sink sink(opt.out_path, out);
  sink.stream() << j.dump(2) << '\n';
}

void RunPbdPmf(const Options& opt, std::ostream& out) {
  const pbd::OpinionVector probs(ParseList(opt.probs));
  const pbd::PmfTable table = opt.pmf_method == "bruteforce"
                                  ? pbd::PmfBruteForce(probs.probs())
                                  : pbd::PmfDftCf(probs.probs());
  if (opt.format == "csv") {
    Sink sink(opt.out_path, out);
    sink.stream() << "t,mass\n";
    for (std::size_t t = 0; t < table.mass.size(); ++t) {
      sink.stream() << t << ',' << FormatNumber(table.mass[t]) << '\n';
    }
    return;
  }
  EmitJson(RoundAll({{"method", opt.pmf_method},
                     {"k", probs.size()},
                     {"pmf", table.mass}}),
           opt, out);
}

void RunPbdTau(const Options& opt, std::ostream& out) {
  const pbd::OpinionVector probs(ParseList(opt.probs));
  const pbd::DemandWindow window(static_cast<int>(probs.size()), opt.theta1,
                                 opt.theta0);
  const double tau = pbd::TauExact(probs.probs(), window);
  if (opt.format == "csv") {
    Sink sink(opt.out_path, out);
    sink.stream() << "k,theta1,theta0,tau\n"
                  << window.k() << ',' << opt.theta1 << ',' << opt.theta0
                  << ',' << FormatNumber(tau) << '\n';
    return;
  }
  EmitJson(RoundAll({{"k", window.k()},
                     {"theta1", opt.theta1},
                     {"theta0", opt.theta0},
                     {"tau", tau}}),
           opt, out);
}

std::string JoinIds(const std::vector<std::string>& ids) {
  std::string s;
  for (std::size_t i = 0; i < ids.size(); ++i) s += (i ? ";" : "") + ids[i];
  return s;
}

std::string JoinIndices(const std::vector<std::size_t>& idx) {
  std::string s;
  for (std::size_t i = 0; i < idx.size(); ++i) {
    s += (i ? ";" : "") + std::to_string(idx[i]);
  }
  return s;
}

Deadline BudgetDeadline(double seconds) {
  return Clock::now() + std::chrono::duration_cast<Clock::duration>(
                            std::chrono::duration<double>(seconds));
}

void RunSelectS(const Options& opt, std::ostream& out) {
  if (opt.k < 1) throw InvalidArgument("-k must be at least 1");
  const io::LabeledMatrix input = io::LoadMatrixCsv(opt.matrix_path);
  const std::size_t n = input.matrix.n();
  const std::size_t k = static_cast<std::size_t>(opt.k);
  if (k > n) {
    throw InvalidArgument("-k " + std::to_string(k) + " exceeds the " +
                          std::to_string(n) + " workers in the matrix");
  }
  if (opt.method == "greedy" && k < 2) {
    throw InvalidArgument("greedy selection needs -k >= 2");
  }
  smodel::Crowd crowd;
  if (opt.method == "exact") {
    crowd = smodel::ExactSelect(input.matrix, k, BudgetDeadline(opt.budget_s));
  } else if (opt.method == "greedy") {
    crowd = smodel::GreedySelect(input.matrix, k);
  } else {
    crowd = smodel::RandomSelect(n, k, opt.seed);
  }
  std::sort(crowd.begin(), crowd.end());
  std::vector<std::string> ids;
  for (std::size_t w : crowd) ids.push_back(input.ids[w]);
  const double div = smodel::Diversity(crowd, input.matrix);
  if (opt.format == "csv") {
    Sink sink(opt.out_path, out);
    sink.stream() << "method,k,members,indices,diversity\n"
                  << opt.method << ',' << k << ',' << JoinIds(ids) << ','
                  << JoinIndices(crowd) << ',' << FormatNumber(div) << '\n';
    return;
  }
  EmitJson(RoundAll({{"method", opt.method},
                     {"k", k},
                     {"members", ids},
                     {"indices", crowd},
                     {"diversity", div}}),
           opt, out);
}

void RunSelectT(const Options& opt, std::ostream& out) {
  if (opt.probs.empty() == opt.pool_path.empty()) {
    throw InvalidArgument("select t needs exactly one of --probs or --pool");
  }
  const auto method = tmodel::ParseMethod(opt.method);
  const pbd::DemandWindow window(opt.k, opt.theta1, opt.theta0);
  opt.sa.Validate();
  const tmodel::CandidatePool pool =
      opt.probs.empty() ? io::LoadPoolCsv(opt.pool_path)
                        : tmodel::CandidatePool::FromProbs(ParseList(opt.probs));
  if (static_cast<std::size_t>(opt.k) > pool.size()) {
    throw InvalidArgument("-k " + std::to_string(opt.k) + " exceeds the " +
                          std::to_string(pool.size()) + " workers in the pool");
  }
  tmodel::SaParams sa = opt.sa;
  sa.seed = opt.seed;
  tmodel::SelectionResult result;
  switch (*method) {
    case tmodel::Method::kExact:
      result = tmodel::ExactSelect(pool, window, BudgetDeadline(opt.budget_s));
      break;
    case tmodel::Method::kPoisson:
      result = tmodel::SelectPoisson(pool, window);
      break;
    case tmodel::Method::kBinomial:
      result = tmodel::SelectBinomial(pool, window);
      break;
    case tmodel::Method::kNormalSa:
      result = tmodel::SaSelect(pool, window, tmodel::SaObjective::kNormal, sa);
      break;
    case tmodel::Method::kDftCfSa:
      result = tmodel::SaSelect(pool, window, tmodel::SaObjective::kDftCf, sa);
      break;
    case tmodel::Method::kRandom:
      result = tmodel::RandomSelect(pool, window, opt.seed);
      break;
  }
  // Wall time is left out so that repeated runs print identical bytes.
  if (opt.format == "csv") {
    Sink sink(opt.out_path, out);
    sink.stream() << "method,k,theta1,theta0,members,indices,tau,objective\n"
                  << opt.method << ',' << opt.k << ',' << opt.theta1 << ','
                  << opt.theta0 << ',' << JoinIds(result.ids) << ','
                  << JoinIndices(result.members) << ','
                  << FormatNumber(result.tau) << ','
                  << FormatNumber(result.objective) << '\n';
    return;
  }
  EmitJson(RoundAll({{"method", opt.method},
                     {"k", opt.k},
                     {"theta1", opt.theta1},
                     {"theta0", opt.theta0},
                     {"members", result.ids},
                     {"indices", result.members},
                     {"tau", result.tau},
                     {"objective", result.objective}}),
           opt, out);
}

std::filesystem::path SummaryPath(const std::string& csv_path) {
  std::filesystem::path p(csv_path);
  p.replace_extension(".summary.json");
  return p;
}

void RunBench(const Options& opt, std::ostream& out) {
  bench::ExperimentConfig cfg =
      bench::ConfigFromJson(io::LoadJson(opt.config_path));
  if (opt.seed_given) cfg.seed = opt.seed;
  if (opt.threads > 0) cfg.threads = opt.threads;
  cfg.Validate();
  const bench::TrialReport report = bench::RunExperiment(cfg);
  const json summary = RoundAll(bench::Summarize(report));
  if (opt.out_path.empty()) {
    if (opt.bench_format == "json") {
      out << summary.dump(2) << '\n';
    } else {
      bench::WriteCsv(report, out);
    }
    return;
  }
  {
    Sink sink(opt.out_path, out);
    bench::WriteCsv(report, sink.stream());
  }
  Sink summary_sink(SummaryPath(opt.out_path).string(), out);
  summary_sink.stream() << summary.dump(2) << '\n';
}

void RunProfileFit(const Options& opt, std::ostream& out) {
  if (opt.topics < 1) throw InvalidArgument("--topics must be at least 1");
  const auto corpus = io::GroupByWorker(io::LoadCorpus(opt.corpus_path));
  if (corpus.experiences.empty()) {
    throw InvalidArgument(opt.corpus_path + ": corpus has no records");
  }
  profile::EmOptions em;
  em.topics = opt.topics;
  em.max_iter = opt.max_iter;
  em.tol = opt.tol;
  em.seed = opt.seed;
  const profile::TopicModel model = profile::EmFit(corpus.experiences, em);
  json j = io::ModelToJson(model);
  j["worker_ids"] = corpus.worker_ids;
  EmitJson(j, opt, out);
}

void RunProfileSimilarity(const Options& opt, std::ostream& out) {
  const profile::TopicModel model =
      io::ModelFromJson(io::LoadJson(opt.model_path));
  const auto corpus = io::GroupByWorker(io::LoadCorpus(opt.corpus_path));
  const smodel::SimilarityMatrix sim =
      profile::ExperienceSimilarityMatrix(corpus.experiences, model);
  if (opt.format == "csv") {
    Sink sink(opt.out_path, out);
    io::WriteMatrixCsv(corpus.worker_ids, sim, sink.stream());
    return;
  }
  std::vector<std::vector<double>> rows(sim.n(), std::vector<double>(sim.n()));
  for (std::size_t i = 0; i < sim.n(); ++i) {
    for (std::size_t j = 0; j < sim.n(); ++j) rows[i][j] = sim(i, j);
  }
  EmitJson(RoundAll({{"ids", corpus.worker_ids}, {"matrix", rows}}), opt,
           out);
}

void AddFormat(CLI::App* app, Options& opt) {
  app->add_option("--format", opt.format, "Output format")
      ->check(CLI::IsMember({"json", "csv"}));
}

void AddOut(CLI::App* app, Options& opt) {
  app->add_option("--out", opt.out_path, "Write results to this path");
}

void AddWindow(CLI::App* app, Options& opt) {
  app->add_option("--theta1", opt.theta1, "Minimum positive votes")
      ->required();
  app->add_option("--theta0", opt.theta0, "Minimum negative votes")
      ->required();
}

void AddSeed(CLI::App* app, Options& opt) {
  app->add_option("--seed", opt.seed, "Seed for all randomness")
      ->each([&opt](const std::string&) { opt.seed_given = true; });
}

void Build(CLI::App& app, Options& opt) {
  app.require_subcommand(1);

  auto* pbd = app.add_subcommand("pbd", "Poisson-Binomial utilities");
  pbd->require_subcommand(1);
  auto* pmf = pbd->add_subcommand("pmf", "Probability mass function");
  pmf->add_option("--probs", opt.probs, "Comma-separated probabilities")
      ->required();
  pmf->add_option("--method", opt.pmf_method, "Computation method")
      ->check(CLI::IsMember({"dftcf", "bruteforce"}));
  AddFormat(pmf, opt);
  AddOut(pmf, opt);
  pmf->callback([&opt] { opt.action = Action::kPbdPmf; });

  auto* tau = pbd->add_subcommand("tau", "Probability of a balanced vote");
  tau->add_option("--probs", opt.probs, "Comma-separated probabilities")
      ->required();
  AddWindow(tau, opt);
  AddFormat(tau, opt);
  AddOut(tau, opt);
  tau->callback([&opt] { opt.action = Action::kPbdTau; });

  auto* select = app.add_subcommand("select", "Select a crowd");
  select->require_subcommand(1);
  auto* s = select->add_subcommand("s", "Similarity-driven selection");
  s->add_option("--matrix", opt.matrix_path, "Similarity matrix CSV")
      ->required();
  s->add_option("-k", opt.k, "Crowd size")->required();
  s->add_option("--method", opt.method, "Solver")
      ->required()
      ->check(CLI::IsMember({"exact", "greedy", "random"}));
  s->add_option("--budget", opt.budget_s, "Exact solver time limit (s)")
      ->check(CLI::PositiveNumber);
  AddSeed(s, opt);
  AddFormat(s, opt);
  AddOut(s, opt);
  s->callback([&opt] { opt.action = Action::kSelectS; });

  auto* t = select->add_subcommand("t", "Task-driven selection");
  auto* probs =
      t->add_option("--probs", opt.probs, "Comma-separated probabilities");
  auto* pool = t->add_option("--pool", opt.pool_path, "Worker pool CSV");
  probs->excludes(pool);
  t->add_option("-k", opt.k, "Crowd size")->required();
  AddWindow(t, opt);
  t->add_option("--method", opt.method, "Solver")
      ->required()
      ->check(CLI::IsMember({"exact", "poisson", "binomial", "normal-sa",
                             "dftcf-sa", "random"}));
  t->add_option("--budget", opt.budget_s, "Exact solver time limit (s)")
      ->check(CLI::PositiveNumber);
  t->add_option("--t-ini", opt.sa.t_ini, "Annealing start temperature");
  t->add_option("--t-end", opt.sa.t_end, "Annealing stop temperature");
  t->add_option("--sa-r", opt.sa.r, "Moves per temperature");
  t->add_option("--sa-c", opt.sa.c, "Cooling ratio");
  AddSeed(t, opt);
  AddFormat(t, opt);
  AddOut(t, opt);
  t->callback([&opt] { opt.action = Action::kSelectT; });

  auto* bench = app.add_subcommand("bench", "Synthetic experiments");
  bench->require_subcommand(1);
  auto* run = bench->add_subcommand("run", "Run an experiment config");
  run->add_option("--config", opt.config_path, "Experiment JSON")->required();
  run->add_option("--threads", opt.threads, "Worker threads")
      ->check(CLI::NonNegativeNumber);
  AddSeed(run, opt);
  run->add_option("--format", opt.bench_format,
                  "Stdout format when --out is absent")
      ->check(CLI::IsMember({"json", "csv"}));
  run->add_option("--out", opt.out_path,
                  "CSV report path; the summary goes next to it");
  run->callback([&opt] { opt.action = Action::kBenchRun; });

  auto* profile = app.add_subcommand("profile", "Worker profiles");
  profile->require_subcommand(1);
  auto* fit = profile->add_subcommand("fit", "Fit a topic model");
  fit->add_option("--corpus", opt.corpus_path, "JSON-lines corpus")
      ->required();
  fit->add_option("--topics", opt.topics, "Number of topics");
  fit->add_option("--max-iter", opt.max_iter, "EM iteration cap")
      ->check(CLI::NonNegativeNumber);
  fit->add_option("--tol", opt.tol, "EM convergence tolerance")
      ->check(CLI::NonNegativeNumber);
  AddSeed(fit, opt);
  AddOut(fit, opt);
  fit->callback([&opt] { opt.action = Action::kProfileFit; });

  auto* sim = profile->add_subcommand("similarity", "Worker similarity matrix");
  sim->add_option("--corpus", opt.corpus_path, "JSON-lines corpus")
      ->required();
  sim->add_option("--model", opt.model_path, "Fitted model JSON")->required();
  AddFormat(sim, opt);
  AddOut(sim, opt);
  sim->callback([&opt] { opt.action = Action::kProfileSimilarity; });
}

void Run(const Options& opt, std::ostream& out) {
  switch (opt.action) {
    case Action::kPbdPmf: return RunPbdPmf(opt, out);
    case Action::kPbdTau: return RunPbdTau(opt, out);
    case Action::kSelectS: return RunSelectS(opt, out);
    case Action::kSelectT: return RunSelectT(opt, out);
    case Action::kBenchRun: return RunBench(opt, out);
    case Action::kProfileFit: return RunProfileFit(opt, out);
    case Action::kProfileSimilarity: return RunProfileSimilarity(opt, out);
    case Action::kNone: break;
  }
  throw InvalidArgument("no command given");
}

}  // namespace

int Dispatch(int argc, const char* const* argv, std::ostream& out,
             std::ostream& err) {
  CLI::App app("Crowd selection toolkit", "crowdsel");
  Options opt;
  Build(app, opt);
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << "crowdsel: " << e.what() << '\n';
    return kExitValidation;
  }
  try {
    Run(opt, out);
  } catch (const InvalidArgument& e) {
    err << "crowdsel: " << e.what() << '\n';
    return kExitValidation;
  } catch (const std::exception& e) {
    err << "crowdsel: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitOk;
}

}  // namespace crowdsel::cli
