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

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "gtest/gtest.h"
#include "json.hpp"

namespace crowdsel::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result Invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "crowdsel");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code =
      Dispatch(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("crowdsel_cli_" +
            std::string(::testing::UnitTest::GetInstance()
                            ->current_test_info()
                            ->name()));
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string Write(const std::string& name, const std::string& body) {
    const auto p = dir_ / name;
    std::ofstream(p) << body;
    return p.string();
  }
  std::string Path(const std::string& name) { return (dir_ / name).string(); }

  static std::string Slurp(const std::string& path) {
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }

  fs::path dir_;
};

void ExpectFailure(const Result& r, int code) {
  EXPECT_EQ(r.code, code);
  EXPECT_TRUE(r.out.empty()) << r.out;
  EXPECT_FALSE(r.err.empty());
  // One-line diagnostic.
  EXPECT_EQ(r.err.find('\n'), r.err.size() - 1) << r.err;
}

TEST_F(CliTest, PbdTau) {
  const auto r = Invoke({"pbd", "tau", "--probs", "0.2,0.4,0.6,0.9", "--theta1",
                      "1", "--theta0", "1"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(r.err.empty());
  EXPECT_NE(r.out.find("0.9376"), std::string::npos) << r.out;
  EXPECT_EQ(json::parse(r.out).at("tau").get<double>(), 0.9376);
}

TEST_F(CliTest, PbdTauCsv) {
  const auto r = Invoke({"pbd", "tau", "--probs", "0.2,0.4,0.6,0.9", "--theta1",
                      "1", "--theta0", "1", "--format", "csv"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out, "k,theta1,theta0,tau\n4,1,1,0.9376\n");
}

TEST_F(CliTest, PbdPmf) {
  for (const char* method : {"dftcf", "bruteforce"}) {
    const auto r =
        Invoke({"pbd", "pmf", "--probs", "0.5,0.5", "--method", method});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(json::parse(r.out).at("pmf"),
              json::parse("[0.25, 0.5, 0.25]"));
  }
}

TEST_F(CliTest, SelectTExact) {
  const auto r = Invoke({"select", "t", "--probs", "0.1,0.5,0.9", "-k", "2",
                      "--theta1", "1", "--theta0", "1", "--method", "exact"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = json::parse(r.out);
  EXPECT_EQ(j.at("indices"), json::parse("[0, 2]"));
  EXPECT_EQ(j.at("members"), json::parse(R"(["0", "2"])"));
  EXPECT_EQ(j.at("tau").get<double>(), 0.82);
}

TEST_F(CliTest, SelectTFromPoolFileAllMethods) {
  const auto pool =
      Write("pool.csv", "worker_id,p\nann,0.1\nbob,0.5\ncid,0.9\ndee,0.3\n");
  for (const char* m :
       {"exact", "poisson", "binomial", "normal-sa", "dftcf-sa", "random"}) {
    const std::vector<std::string> args{
        "select", "t",    "--pool", pool,  "-k",     "2",      "--theta1",
        "1",      "--theta0", "1", "--method", m, "--seed", "4", "--sa-r", "20"};
    const auto a = Invoke(args);
    ASSERT_EQ(a.code, 0) << m << ": " << a.err;
    const auto j = json::parse(a.out);
    EXPECT_EQ(j.at("members").size(), 2u);
    EXPECT_EQ(j.at("method"), m);
    // Byte-identical on rerun.
    EXPECT_EQ(Invoke(args).out, a.out);
  }
}

TEST_F(CliTest, SelectTValidation) {
  ExpectFailure(Invoke({"select", "t", "--probs", "0.1,0.5", "-k", "2",
                     "--theta1", "2", "--theta0", "1", "--method", "exact"}),
                2);
  ExpectFailure(Invoke({"select", "t", "--probs", "0.1,0.5", "-k", "3",
                     "--theta1", "1", "--theta0", "1", "--method", "exact"}),
                2);
  ExpectFailure(Invoke({"select", "t", "--probs", "0.1,1.5", "-k", "2",
                     "--theta1", "1", "--theta0", "1", "--method", "exact"}),
                2);
  ExpectFailure(Invoke({"select", "t", "--probs", "0.1,abc", "-k", "2",
                     "--theta1", "1", "--theta0", "1", "--method", "exact"}),
                2);
  ExpectFailure(Invoke({"select", "t", "-k", "2", "--theta1", "1", "--theta0",
                     "1", "--method", "exact"}),
                2);
  ExpectFailure(Invoke({"select", "t", "--probs", "0.1,0.5", "-k", "2",
                     "--theta1", "1", "--theta0", "1", "--method", "greedy"}),
                2);
  ExpectFailure(Invoke({"select", "t", "--probs", "0.1,0.5", "-k", "2",
                     "--theta1", "1", "--theta0", "1", "--method",
                     "dftcf-sa", "--sa-c", "2"}),
                2);
}

TEST_F(CliTest, SelectS) {
  const auto m = Write("m.csv",
                       "A,B,C,D\n"
                       "0,0.9,0.1,0.5\n"
                       "0.9,0,0.8,0.2\n"
                       "0.1,0.8,0,0.7\n"
                       "0.5,0.2,0.7,0\n");
  const auto exact = Invoke({"select", "s", "--matrix", m, "-k", "2",
                          "--method", "exact"});
  ASSERT_EQ(exact.code, 0) << exact.err;
  const auto j = json::parse(exact.out);
  EXPECT_EQ(j.at("members"), json::parse(R"(["A", "C"])"));
  EXPECT_EQ(j.at("diversity").get<double>(), -0.05);
  const auto greedy = Invoke({"select", "s", "--matrix", m, "-k", "3",
                           "--method", "greedy", "--format", "csv"});
  ASSERT_EQ(greedy.code, 0) << greedy.err;
  EXPECT_EQ(greedy.out.rfind("method,k,members,indices,diversity\n", 0), 0u);
  const auto random = Invoke({"select", "s", "--matrix", m, "-k", "3",
                           "--method", "random", "--seed", "8"});
  EXPECT_EQ(random.out, Invoke({"select", "s", "--matrix", m, "-k", "3",
                             "--method", "random", "--seed", "8"})
                            .out);
}

TEST_F(CliTest, SelectSValidation) {
  const auto m = Write("m.csv", "A,B\n0,0.5\n0.5,0\n");
  const auto bad = Write("bad.csv", "A,B\n0,0.5\n0.4,0\n");
  ExpectFailure(
      Invoke({"select", "s", "--matrix", m, "-k", "0", "--method", "exact"}), 2);
  ExpectFailure(
      Invoke({"select", "s", "--matrix", m, "-k", "3", "--method", "exact"}), 2);
  ExpectFailure(
      Invoke({"select", "s", "--matrix", m, "-k", "1", "--method", "greedy"}), 2);
  const auto r =
      Invoke({"select", "s", "--matrix", bad, "-k", "1", "--method", "exact"});
  ExpectFailure(r, 2);
  EXPECT_NE(r.err.find("line 2"), std::string::npos);
  ExpectFailure(Invoke({"select", "s", "--matrix", Path("missing.csv"), "-k",
                     "1", "--method", "exact"}),
                2);
}

TEST_F(CliTest, UnknownSubcommandAndMissingArgs) {
  ExpectFailure(Invoke({"frobnicate"}), 2);
  ExpectFailure(Invoke({}), 2);
  ExpectFailure(Invoke({"pbd"}), 2);
  ExpectFailure(Invoke({"pbd", "tau", "--probs", "0.5"}), 2);
}

TEST_F(CliTest, HelpGoesToStdout) {
  const auto r = Invoke({"--help"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("select"), std::string::npos);
  EXPECT_TRUE(r.err.empty());
}

TEST_F(CliTest, OutPathAndUnwritableOut) {
  const auto out = Path("tau.json");
  const auto r = Invoke({"pbd", "tau", "--probs", "0.5", "--theta1", "0",
                      "--theta0", "0", "--out", out});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(r.out.empty());
  EXPECT_EQ(json::parse(Slurp(out)).at("tau").get<double>(), 1.0);
  ExpectFailure(Invoke({"pbd", "tau", "--probs", "0.5", "--theta1", "0",
                     "--theta0", "0", "--out", Path("no/such/dir/x.json")}),
                3);
}

TEST_F(CliTest, BenchRun) {
  const auto cfg = Write("cfg.json", R"({
    "model": "tmodel", "n": 10, "trials": 3, "k": [4],
    "demands": [{"theta1": 1, "theta0": "k/4"}],
    "methods": ["exact", "poisson", "random"], "sa": {"r": 10}
  })");
  const auto out = Path("report.csv");
  const auto r = Invoke({"bench", "run", "--config", cfg, "--out", out,
                      "--seed", "3"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto csv = Slurp(out);
  EXPECT_EQ(csv.rfind(
                "trial,method,k,theta1,theta0,objective,tau_or_div,"
                "wall_time_s,status\n",
                0),
            0u);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 10);
  const auto summary = json::parse(Slurp(Path("report.summary.json")));
  EXPECT_EQ(summary.at("rows"), 9);
  EXPECT_TRUE(summary.at("methods").contains("poisson"));

  const auto stdout_csv = Invoke({"bench", "run", "--config", cfg});
  ASSERT_EQ(stdout_csv.code, 0) << stdout_csv.err;
  EXPECT_EQ(stdout_csv.out.rfind("trial,method", 0), 0u);
  const auto stdout_json =
      Invoke({"bench", "run", "--config", cfg, "--format", "json"});
  EXPECT_EQ(json::parse(stdout_json.out).at("rows"), 9);
}

TEST_F(CliTest, BenchRunBadConfig) {
  ExpectFailure(Invoke({"bench", "run", "--config",
                     Write("a.json", R"({"model": "smodel"})")}),
                2);
  ExpectFailure(Invoke({"bench", "run", "--config", Write("b.json", "{oops")}),
                2);
  ExpectFailure(
      Invoke({"bench", "run", "--config",
           Write("c.json", R"({"model": "tmodel", "n": 5, "k": [2],
                               "methods": ["nope"], "demands": []})")}),
      2);
}

TEST_F(CliTest, ProfileFitAndSimilarity) {
  const auto corpus = Write(
      "corpus.jsonl",
      R"({"worker_id": "u1", "task_id": "t1", "text": "apple pear apple"})"
      "\n"
      R"({"worker_id": "u2", "task_id": "t1", "text": "pear apple pear"})"
      "\n"
      R"({"worker_id": "u3", "task_id": "t1", "text": "rock stone stone"})"
      "\n");
  const auto model = Path("model.json");
  const auto fit = Invoke({"profile", "fit", "--corpus", corpus, "--topics", "2",
                        "--seed", "1", "--out", model});
  ASSERT_EQ(fit.code, 0) << fit.err;
  const auto j = json::parse(Slurp(model));
  for (const char* key : {"pi", "mu", "vocab", "log_likelihood_trace"}) {
    EXPECT_TRUE(j.contains(key)) << key;
  }
  EXPECT_EQ(j.at("worker_ids"), json::parse(R"(["u1", "u2", "u3"])"));

  const auto sim = Invoke({"profile", "similarity", "--corpus", corpus,
                        "--model", model, "--format", "csv", "--out",
                        Path("sim.csv")});
  ASSERT_EQ(sim.code, 0) << sim.err;
  const auto pick = Invoke({"select", "s", "--matrix", Path("sim.csv"), "-k",
                         "2", "--method", "exact"});
  ASSERT_EQ(pick.code, 0) << pick.err;
  const auto members = json::parse(pick.out).at("members");
  EXPECT_NE(std::find(members.begin(), members.end(), "u3"), members.end());

  const auto sim_json =
      Invoke({"profile", "similarity", "--corpus", corpus, "--model", model});
  ASSERT_EQ(sim_json.code, 0) << sim_json.err;
  EXPECT_EQ(json::parse(sim_json.out).at("matrix").size(), 3u);
}

TEST_F(CliTest, ProfileRejectsDuplicateRecords) {
  const auto corpus = Write(
      "dup.jsonl",
      R"({"worker_id": "u1", "task_id": "t1", "text": "a"})"
      "\n"
      R"({"worker_id": "u1", "task_id": "t1", "text": "b"})"
      "\n");
  const auto r = Invoke({"profile", "fit", "--corpus", corpus});
  ExpectFailure(r, 2);
  EXPECT_NE(r.err.find("line 2"), std::string::npos);
}

}  // namespace
}  // namespace crowdsel::cli
