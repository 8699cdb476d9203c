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

// Attack x level x seed x metric-config grids over one or more language
// pairs, with per-cell artifacts kept on disk for auditing.

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"
#include "robeval/attacks.hpp"
#include "robeval/correlate.hpp"
#include "robeval/scorer.hpp"

namespace robeval {

struct DatasetPaths {
  std::string lang_pair;
  std::filesystem::path references;
  std::filesystem::path outputs;
  std::filesystem::path judgments;
};

struct SweepMetric {
  std::string name;  // file stem of the per-cell scores file
  MetricConfig metric;
};

struct SweepConfig {
  std::vector<AttackKind> attacks;
  std::vector<double> p_grid = {0.0, 0.1, 0.2, 0.3};
  std::vector<uint64_t> seeds;
  std::vector<SweepMetric> configs;
  std::vector<DatasetPaths> datasets;
  std::filesystem::path vocab;      // empty: <resources>/vocab_30k.txt
  std::filesystem::path resources;  // empty: default_data_dir()
  std::filesystem::path out_dir;
  TieMode ties = TieMode::kDenominator;
  size_t workers = 1;

  // Throws ValidationError listing the first broken invariant.
  void validate() const;

  // Relative paths resolve against base_dir. Unknown keys are rejected.
  static SweepConfig from_json(const nlohmann::json& j, const std::filesystem::path& base_dir);
  static SweepConfig load(const std::filesystem::path& path);
};

struct ReportRow {
  std::string attack;
  double p = 0.0;
  std::string config;  // SweepMetric::name
  std::string provider;
  std::string model;
  std::string layer_policy;
  std::string lang_pair;
  uint64_t seed = 0;
  double kendall = 0.0;
  size_t n_pairs = 0;
  double mean_f1 = 0.0;
  double unk_per_segment = 0.0;
};

struct SweepError {
  std::string attack;
  double p = 0.0;
  uint64_t seed = 0;
  std::string lang_pair;
  std::string config;  // empty for cell-wide failures
  std::string message;
};

struct SweepResult {
  std::vector<ReportRow> rows;     // grid order: attack, p, seed, lang pair, config
  std::vector<SweepError> errors;  // same order
};

// Relative directory of a cell under out_dir: cells/<attack>/<p>/<seed>/<lang_pair>.
std::filesystem::path cell_dir(AttackKind attack, double p, uint64_t seed,
                               const std::string& lang_pair);

// Perturbs references, scores every output against its perturbed reference
// with each metric, persists refs.jsonl and <config>.scores.tsv per cell, and
// writes errors.tsv (header only when clean). Cells run on a bounded pool.
SweepResult run_sweep(const SweepConfig& config);

// sweep.csv, summary.md and curves.csv under out_dir. Throws
// ValidationError on empty rows and IoError on write failures.
void emit_report(const std::vector<ReportRow>& rows, const SweepConfig& config);

std::string format_sweep_csv(const std::vector<ReportRow>& rows);
std::string format_summary_md(const std::vector<ReportRow>& rows, const SweepConfig& config);
std::string format_curves_csv(const std::vector<ReportRow>& rows, const SweepConfig& config);

}  // namespace robeval
