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

// File formats read and written by the command-line tool.
//
//   matrix CSV   first row: worker ids; then n rows of n numbers.
//   pool CSV     header "worker_id,p"; one worker per row.
//   corpus       JSON lines {"worker_id", "task_id", "text"}; at most one
//                record per (task, worker).
//   topic model  JSON {"pi", "mu", "vocab", "log_likelihood_trace"}.
//
// Parse failures throw InvalidArgument naming the offending line.

#ifndef CROWDSEL_IO_H_
#define CROWDSEL_IO_H_

#include <iosfwd>
#include <string>
#include <vector>

#include "crowdsel/profile.h"
#include "crowdsel/smodel.h"
#include "crowdsel/tmodel.h"
#include "json.hpp"

namespace crowdsel::io {

struct LabeledMatrix {
  std::vector<std::string> ids;
  smodel::SimilarityMatrix matrix;
};

LabeledMatrix ParseMatrixCsv(std::istream& in);
LabeledMatrix LoadMatrixCsv(const std::string& path);
void WriteMatrixCsv(const std::vector<std::string>& ids,
                    const smodel::SimilarityMatrix& matrix, std::ostream& out);

tmodel::CandidatePool ParsePoolCsv(std::istream& in);
tmodel::CandidatePool LoadPoolCsv(const std::string& path);

struct CorpusRecord {
  std::string worker_id;
  std::string task_id;
  std::string text;
};

std::vector<CorpusRecord> ParseCorpus(std::istream& in);
std::vector<CorpusRecord> LoadCorpus(const std::string& path);

// One Experience per worker, in order of first appearance.
struct WorkerCorpus {
  std::vector<std::string> worker_ids;
  std::vector<profile::Experience> experiences;
};

WorkerCorpus GroupByWorker(const std::vector<CorpusRecord>& records,
                           const profile::Stemmer& stem = {});

nlohmann::json ModelToJson(const profile::TopicModel& model);
profile::TopicModel ModelFromJson(const nlohmann::json& j);

nlohmann::json LoadJson(const std::string& path);

}  // namespace crowdsel::io

#endif  // CROWDSEL_IO_H_
