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

#include "crowdsel/io.h"

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "crowdsel/errors.h"
#include "gtest/gtest.h"

namespace crowdsel::io {
namespace {

template <typename F>
std::string ErrorOf(F&& f) {
  try {
    f();
  } catch (const InvalidArgument& e) {
    return e.what();
  }
  return "";
}

TEST(MatrixCsvTest, ParsesSymmetricMatrix) {
  std::istringstream in("a,b,c\n0,0.5,-1\n0.5,0,2\n-1,2,0\n");
  const auto m = ParseMatrixCsv(in);
  EXPECT_EQ(m.ids, (std::vector<std::string>{"a", "b", "c"}));
  EXPECT_EQ(m.matrix.n(), 3u);
  EXPECT_EQ(m.matrix(0, 2), -1.0);
  EXPECT_EQ(m.matrix(2, 1), 2.0);
}

TEST(MatrixCsvTest, ToleratesBlankLinesAndTinyAsymmetry) {
  std::istringstream in("\na, b\n\n0, 0.5\n0.5000000000001, 0\n\n");
  EXPECT_EQ(ParseMatrixCsv(in).matrix.n(), 2u);
}

TEST(MatrixCsvTest, Rejections) {
  auto err = [](const char* text) {
    return ErrorOf([&] {
      std::istringstream in(text);
      ParseMatrixCsv(in);
    });
  };
  EXPECT_NE(err("a,b\n0,0.5\n0.4,0\n").find("line 2"), std::string::npos);
  EXPECT_NE(err("a,b\n0,0.5\n0.4,0\n").find("symmetric"), std::string::npos);
  EXPECT_NE(err("a,b\n0,0.5,1\n0.5,0\n").find("line 2"), std::string::npos);
  EXPECT_NE(err("a,b\n0,x\nx,0\n").find("line 2"), std::string::npos);
  EXPECT_NE(err("a,b\n0,0.5\n").find("rows"), std::string::npos);
  EXPECT_NE(err("a,b\n0,0\n0,0\n0,0\n").find("line 4"), std::string::npos);
  EXPECT_NE(err("a,a\n0,0\n0,0\n").find("unique"), std::string::npos);
  EXPECT_NE(err("").find("empty"), std::string::npos);
  EXPECT_NE(err("a,b\n0,nan\nnan,0\n"), "");
}

TEST(MatrixCsvTest, RoundTrip) {
  const smodel::SimilarityMatrix m(2, {0.0, -0.1, -0.1, 0.0});
  std::ostringstream out;
  WriteMatrixCsv({"x", "y"}, m, out);
  EXPECT_EQ(out.str(), "x,y\n0,-0.1\n-0.1,0\n");
  std::istringstream in(out.str());
  EXPECT_EQ(ParseMatrixCsv(in).matrix(0, 1), -0.1);
}

TEST(PoolCsvTest, Parses) {
  std::istringstream in("worker_id,p\nann,0.2\nbob,1\n");
  const auto pool = ParsePoolCsv(in);
  ASSERT_EQ(pool.size(), 2u);
  EXPECT_EQ(pool.id(1), "bob");
  EXPECT_EQ(pool.prob(0), 0.2);
}

TEST(PoolCsvTest, Rejections) {
  auto err = [](const char* text) {
    return ErrorOf([&] {
      std::istringstream in(text);
      ParsePoolCsv(in);
    });
  };
  const auto range = err("worker_id,p\nann,0.2\nbob,1.5\n");
  EXPECT_NE(range.find("line 3"), std::string::npos);
  EXPECT_NE(range.find("bob"), std::string::npos);
  EXPECT_NE(err("id,p\nann,0.2\n").find("header"), std::string::npos);
  EXPECT_NE(err("worker_id,p\nann,0.2\nann,0.3\n").find("duplicate"),
            std::string::npos);
  EXPECT_NE(err("worker_id,p\nann\n").find("line 2"), std::string::npos);
  EXPECT_NE(err("worker_id,p\n").find("no workers"), std::string::npos);
  EXPECT_NE(err("worker_id,p\nann,-0.1\n").find("line 2"), std::string::npos);
}

TEST(CorpusTest, ParsesAndGroups) {
  std::istringstream in(
      R"({"worker_id": "w2", "task_id": "t1", "text": "Great food"})" "\n"
      R"({"worker_id": "w1", "task_id": "t1", "text": "bad food"})" "\n"
      "\n"
      R"({"worker_id": "w2", "task_id": "t2", "text": "great view"})" "\n");
  const auto records = ParseCorpus(in);
  ASSERT_EQ(records.size(), 3u);
  const auto grouped = GroupByWorker(records);
  EXPECT_EQ(grouped.worker_ids, (std::vector<std::string>{"w2", "w1"}));
  EXPECT_EQ(grouped.experiences[0].total(), 4);
  EXPECT_EQ(grouped.experiences[0].counts().at("great"), 2);
  EXPECT_EQ(grouped.experiences[1].counts().at("bad"), 1);
}

TEST(CorpusTest, RejectsDuplicateTaskWorkerPair) {
  std::istringstream in(
      R"({"worker_id": "w1", "task_id": "t1", "text": "a"})" "\n"
      R"({"worker_id": "w2", "task_id": "t1", "text": "b"})" "\n"
      R"({"worker_id": "w1", "task_id": "t1", "text": "c"})" "\n");
  const auto msg = ErrorOf([&] { ParseCorpus(in); });
  EXPECT_NE(msg.find("line 3"), std::string::npos);
  EXPECT_NE(msg.find("first on line 1"), std::string::npos);
  EXPECT_NE(msg.find("at most one record per task"), std::string::npos);
}

TEST(CorpusTest, RejectsMalformedRecords) {
  for (const char* text :
       {"{not json}\n", R"({"worker_id": "w", "text": "x"})" "\n",
        R"({"worker_id": 3, "task_id": "t", "text": "x"})" "\n",
        R"({"worker_id": "", "task_id": "t", "text": "x"})" "\n"}) {
    std::istringstream in(text);
    EXPECT_NE(ErrorOf([&] { ParseCorpus(in); }).find("line 1"),
              std::string::npos)
        << text;
  }
}

TEST(ModelJsonTest, RoundTripAndValidation) {
  profile::TopicModel m;
  m.pi = {0.25, 0.75};
  m.mu = {{0.5, 0.5}, {0.1, 0.9}};
  m.vocab = {"a", "b"};
  m.log_likelihood_trace = {-3.0, -2.5};
  const auto back = ModelFromJson(ModelToJson(m));
  EXPECT_EQ(back.pi, m.pi);
  EXPECT_EQ(back.mu, m.mu);
  EXPECT_EQ(back.vocab, m.vocab);
  EXPECT_EQ(back.log_likelihood_trace, m.log_likelihood_trace);

  auto j = ModelToJson(m);
  j["mu"][1] = {0.1};
  EXPECT_THROW(ModelFromJson(j), InvalidArgument);
  EXPECT_THROW(ModelFromJson(nlohmann::json::object()), InvalidArgument);
}

TEST(FileTest, MissingFilesAndPathInMessages) {
  EXPECT_THROW(LoadMatrixCsv("/nonexistent/m.csv"), InvalidArgument);
  EXPECT_THROW(LoadPoolCsv("/nonexistent/p.csv"), InvalidArgument);
  EXPECT_THROW(LoadCorpus("/nonexistent/c.jsonl"), InvalidArgument);
  EXPECT_THROW(LoadJson("/nonexistent/x.json"), InvalidArgument);

  const auto path =
      std::filesystem::temp_directory_path() / "crowdsel_io_test_pool.csv";
  std::ofstream(path) << "worker_id,p\nx,2\n";
  const auto msg = ErrorOf([&] { LoadPoolCsv(path.string()); });
  EXPECT_NE(msg.find(path.string()), std::string::npos);
  EXPECT_NE(msg.find("line 2"), std::string::npos);
  std::filesystem::remove(path);
}

}  // namespace
}  // namespace crowdsel::io
