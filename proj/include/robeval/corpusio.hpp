// Copyright 2026 The robeval Authors
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

#pragma once

// Evaluation data in the harness's native formats:
//   segments.jsonl   {"seg_id": str, "text": str}
//   outputs.jsonl    {"seg_id": str, "system": str, "text": str}
//   judgments.tsv    header `lang_pair<TAB>seg_id<TAB>better<TAB>worse`

#include <cstddef>
#include <filesystem>
#include <fstream>
#include <iosfwd>
#include <string>
#include <vector>

namespace robeval {

struct Segment {
  std::string seg_id;
  std::string text;

  friend bool operator==(const Segment&, const Segment&) = default;
};

struct SystemOutput {
  std::string seg_id;
  std::string system;
  std::string text;

  friend bool operator==(const SystemOutput&, const SystemOutput&) = default;
};

// One relative-ranking record: humans preferred `better_system`'s output for
// `seg_id` over `worse_system`'s.
struct JudgmentPair {
  std::string lang_pair;
  std::string seg_id;
  std::string better_system;
  std::string worse_system;

  friend bool operator==(const JudgmentPair&, const JudgmentPair&) = default;
};

struct Dataset {
  std::string lang_pair;
  std::vector<Segment> references;
  std::vector<SystemOutput> outputs;
  std::vector<JudgmentPair> judgments;
};

struct DatasetStats {
  size_t n_segments = 0;
  size_t n_systems = 0;
  size_t n_judgment_pairs = 0;

  friend bool operator==(const DatasetStats&, const DatasetStats&) = default;
};

// Parsers take a source name for error messages ("<source>:<line>: ...").
std::vector<Segment> parse_segments(std::istream& in, const std::string& source);
std::vector<SystemOutput> parse_outputs(std::istream& in, const std::string& source);
std::vector<JudgmentPair> parse_judgments(std::istream& in, const std::string& source);

std::vector<Segment> load_segments(const std::filesystem::path& path);
std::vector<SystemOutput> load_outputs(const std::filesystem::path& path);
std::vector<JudgmentPair> load_judgments(const std::filesystem::path& path);

void write_segments(std::ostream& out, const std::vector<Segment>& segments);
void write_outputs(std::ostream& out, const std::vector<SystemOutput>& outputs);
void write_judgments(std::ostream& out, const std::vector<JudgmentPair>& judgments);

void save_segments(const std::filesystem::path& path, const std::vector<Segment>& segments);

// Every problem found, one message each; empty when the dataset is valid.
std::vector<std::string> validate_dataset(const Dataset& ds);

// Loads and validates; throws ValidationError listing all offenders.
Dataset load_dataset(const std::string& lang_pair,
                     const std::filesystem::path& references,
                     const std::filesystem::path& outputs,
                     const std::filesystem::path& judgments);

DatasetStats dataset_stats(const Dataset& ds);

// Opens a file for reading or throws IoError.
std::ifstream open_input(const std::filesystem::path& path);
// Creates parent directories and opens for writing or throws IoError.
std::ofstream open_output(const std::filesystem::path& path);

}  // namespace robeval
