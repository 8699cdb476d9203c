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

#include <cstddef>
#include <filesystem>
#include <istream>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "robeval/corpusio.hpp"

namespace robeval {

// How a judgment whose two scores are equal enters the Kendall-like value.
enum class TieMode {
  kDenominator,  // counted in the denominator only
  kDiscordant,   // counted as discordant
  kDrop,         // excluded entirely
};

std::string_view to_string(TieMode mode);
TieMode parse_tie_mode(std::string_view name);

struct CorrelationResult {
  enum class Kind { kKendallDarr, kPearson };

  Kind kind = Kind::kKendallDarr;
  double value = 0.0;
  size_t n_pairs = 0;
  size_t concordant = 0;
  size_t discordant = 0;
  size_t ties = 0;
};

// Keyed by (system, seg_id).
using ScoreMap = std::map<std::pair<std::string, std::string>, double>;

// value = (concordant - discordant) / (concordant + discordant + ties), with
// ties handled per mode. n_pairs counts the judgments that enter the value.
// Throws ValidationError naming the first missing score key, or when no
// pair is usable.
CorrelationResult kendall_darr(const std::vector<JudgmentPair>& judgments,
                               const ScoreMap& scores,
                               TieMode ties = TieMode::kDenominator);

// Sample Pearson r. Throws ValidationError on length mismatch, fewer than
// two points or zero variance.
double pearson(const std::vector<double>& xs, const std::vector<double>& ys);

// Unweighted mean of the values. Throws on an empty map.
double average_over_pairs(const std::map<std::string, CorrelationResult>& results);
double average_over_pairs(const std::map<std::string, double>& values);

// Argmax; ties go to the lowest layer. Throws on an empty map.
std::pair<int, double> select_best_layer(const std::map<int, double>& per_layer);

// Scores TSV: `system<TAB>seg_id<TAB>score`, extra columns ignored. A first
// line whose first field is "system" is treated as a header.
ScoreMap parse_scores_tsv(std::istream& in, const std::string& source);
ScoreMap load_scores_tsv(const std::filesystem::path& path);

}  // namespace robeval
