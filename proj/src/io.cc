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

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <utility>

#include "crowdsel/errors.h"

namespace crowdsel::io {
namespace {

std::string Trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> SplitCsv(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    out.push_back(Trim(std::string_view(line).substr(
        start, comma == std::string::npos ? std::string::npos
                                          : comma - start)));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

[[noreturn]] void Fail(int line, const std::string& what) {
  throw InvalidArgument("line " + std::to_string(line) + ": " + what);
}

double ParseNumber(const std::string& field, int line) {
  double v = 0.0;
  const char* first = field.data();
  const char* last = first + field.size();
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last || field.empty() || !std::isfinite(v)) {
    Fail(line, "'" + field + "' is not a finite number");
  }
  return v;
}

bool IsBlank(const std::string& line) { return Trim(line).empty(); }

std::ifstream Open(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open '" + path + "'");
  return in;
}

template <typename T, typename F>
T WithPath(const std::string& path, F&& parse) {
  auto in = Open(path);
  try {
    return parse(in);
  } catch (const InvalidArgument& e) {
    throw InvalidArgument(path + ": " + e.what());
  }
}

}  // namespace

LabeledMatrix ParseMatrixCsv(std::istream& in) {
  std::string line;
  int lineno = 0;
  std::vector<std::string> ids;
  while (std::getline(in, line)) {
    ++lineno;
    if (IsBlank(line)) continue;
    ids = SplitCsv(line);
    break;
  }
  if (ids.empty()) throw InvalidArgument("matrix file is empty");
  const std::size_t n = ids.size();
  std::set<std::string> unique(ids.begin(), ids.end());
  if (unique.size() != n || unique.count("")) {
    Fail(lineno, "worker ids must be unique and non-empty");
  }

  std::vector<double> flat;
  flat.reserve(n * n);
  std::vector<int> row_lines;
  while (std::getline(in, line)) {
    ++lineno;
    if (IsBlank(line)) continue;
    const auto fields = SplitCsv(line);
    if (fields.size() != n) {
      Fail(lineno, "expected " + std::to_string(n) + " values, got " +
                       std::to_string(fields.size()));
    }
    if (row_lines.size() == n) Fail(lineno, "more than n matrix rows");
    for (const auto& f : fields) flat.push_back(ParseNumber(f, lineno));
    row_lines.push_back(lineno);
  }
  if (row_lines.size() != n) {
    throw InvalidArgument("expected " + std::to_string(n) + " matrix rows, got " +
                          std::to_string(row_lines.size()));
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (std::abs(flat[i * n + j] - flat[j * n + i]) > 1e-9) {
        Fail(row_lines[i], "matrix is not symmetric: entry (" + ids[i] + ", " +
                               ids[j] + ") differs from (" + ids[j] + ", " +
                               ids[i] + ") on line " +
                               std::to_string(row_lines[j]));
      }
    }
  }
  return {std::move(ids), smodel::SimilarityMatrix(n, std::move(flat))};
}

LabeledMatrix LoadMatrixCsv(const std::string& path) {
  return WithPath<LabeledMatrix>(
      path, [](std::istream& in) { return ParseMatrixCsv(in); });
}

void WriteMatrixCsv(const std::vector<std::string>& ids,
                    const smodel::SimilarityMatrix& matrix, std::ostream& out) {
  for (std::size_t i = 0; i < ids.size(); ++i) {
    out << (i ? "," : "") << ids[i];
  }
  out << '\n';
  char buf[64];
  for (std::size_t i = 0; i < matrix.n(); ++i) {
    for (std::size_t j = 0; j < matrix.n(); ++j) {
      auto [end, ec] = std::to_chars(buf, buf + sizeof buf, matrix(i, j));
      out << (j ? "," : "") << std::string_view(buf, end - buf);
    }
    out << '\n';
  }
}

tmodel::CandidatePool ParsePoolCsv(std::istream& in) {
  std::string line;
  int lineno = 0;
  bool header = false;
  std::vector<std::string> ids;
  std::vector<double> probs;
  std::set<std::string> seen;
  while (std::getline(in, line)) {
    ++lineno;
    if (IsBlank(line)) continue;
    const auto fields = SplitCsv(line);
    if (!header) {
      if (fields.size() != 2 || fields[0] != "worker_id" || fields[1] != "p") {
        Fail(lineno, "expected header 'worker_id,p'");
      }
      header = true;
      continue;
    }
    if (fields.size() != 2) Fail(lineno, "expected 2 fields");
    if (fields[0].empty()) Fail(lineno, "empty worker id");
    if (!seen.insert(fields[0]).second) {
      Fail(lineno, "duplicate worker id '" + fields[0] + "'");
    }
    const double p = ParseNumber(fields[1], lineno);
    if (p < 0.0 || p > 1.0) {
      Fail(lineno, "probability " + fields[1] + " for worker '" + fields[0] +
                       "' is outside [0, 1]");
    }
    ids.push_back(fields[0]);
    probs.push_back(p);
  }
  if (!header) throw InvalidArgument("pool file is empty");
  if (ids.empty()) throw InvalidArgument("pool file has no workers");
  return tmodel::CandidatePool(std::move(ids), std::move(probs));
}

tmodel::CandidatePool LoadPoolCsv(const std::string& path) {
  return WithPath<tmodel::CandidatePool>(
      path, [](std::istream& in) { return ParsePoolCsv(in); });
}

std::vector<CorpusRecord> ParseCorpus(std::istream& in) {
  std::vector<CorpusRecord> out;
  std::map<std::pair<std::string, std::string>, int> first_line;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (IsBlank(line)) continue;
    CorpusRecord rec;
    try {
      const auto j = nlohmann::json::parse(line);
      rec.worker_id = j.at("worker_id").get<std::string>();
      rec.task_id = j.at("task_id").get<std::string>();
      rec.text = j.at("text").get<std::string>();
    } catch (const nlohmann::json::exception& e) {
      Fail(lineno, std::string("bad corpus record: ") + e.what());
    }
    if (rec.worker_id.empty() || rec.task_id.empty()) {
      Fail(lineno, "worker_id and task_id must be non-empty");
    }
    const auto [it, inserted] =
        first_line.emplace(std::make_pair(rec.task_id, rec.worker_id), lineno);
    if (!inserted) {
      Fail(lineno, "duplicate record for task '" + rec.task_id +
                       "' and worker '" + rec.worker_id +
                       "' (first on line " + std::to_string(it->second) +
                       "); a worker has at most one record per task");
    }
    out.push_back(std::move(rec));
  }
  return out;
}

std::vector<CorpusRecord> LoadCorpus(const std::string& path) {
  return WithPath<std::vector<CorpusRecord>>(
      path, [](std::istream& in) { return ParseCorpus(in); });
}

WorkerCorpus GroupByWorker(const std::vector<CorpusRecord>& records,
                           const profile::Stemmer& stem) {
  WorkerCorpus out;
  std::map<std::string, std::size_t> slot;
  for (const auto& rec : records) {
    auto [it, inserted] = slot.emplace(rec.worker_id, out.worker_ids.size());
    if (inserted) {
      out.worker_ids.push_back(rec.worker_id);
      out.experiences.emplace_back();
    }
    out.experiences[it->second].AddText(rec.text, stem);
  }
  return out;
}

nlohmann::json ModelToJson(const profile::TopicModel& model) {
  return {{"pi", model.pi},
          {"mu", model.mu},
          {"vocab", model.vocab},
          {"log_likelihood_trace", model.log_likelihood_trace}};
}

profile::TopicModel ModelFromJson(const nlohmann::json& j) {
  profile::TopicModel model;
  try {
    model.pi = j.at("pi").get<std::vector<double>>();
    model.mu = j.at("mu").get<std::vector<std::vector<double>>>();
    model.vocab = j.at("vocab").get<std::vector<std::string>>();
    if (j.contains("log_likelihood_trace")) {
      model.log_likelihood_trace =
          j.at("log_likelihood_trace").get<std::vector<double>>();
    }
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("bad topic model: ") + e.what());
  }
  if (model.pi.empty() || model.mu.size() != model.pi.size()) {
    throw InvalidArgument("topic model: pi and mu disagree on topic count");
  }
  for (const auto& row : model.mu) {
    if (row.size() != model.vocab.size()) {
      throw InvalidArgument("topic model: mu row length differs from vocab");
    }
  }
  return model;
}

nlohmann::json LoadJson(const std::string& path) {
  auto in = Open(path);
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(path + ": " + e.what());
  }
}

}  // namespace crowdsel::io
