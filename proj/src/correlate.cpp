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

#include "robeval/correlate.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>

#include "robeval/error.hpp"
#include "robeval/text.hpp"

namespace robeval {
namespace {

std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> fields;
  size_t start = 0;
  while (true) {
    const size_t tab = line.find('\t', start);
    fields.push_back(line.substr(start, tab - start));
    if (tab == std::string::npos) break;
    start = tab + 1;
  }
  return fields;
}

}  // namespace

std::string_view to_string(TieMode mode) {
  switch (mode) {
    case TieMode::kDenominator: return "denominator";
    case TieMode::kDiscordant: return "discordant";
    case TieMode::kDrop: return "drop";
  }
  return "unknown";
}

TieMode parse_tie_mode(std::string_view name) {
  if (name == "denominator") return TieMode::kDenominator;
  if (name == "discordant") return TieMode::kDiscordant;
  if (name == "drop") return TieMode::kDrop;
  throw ValidationError("unknown tie mode \"" + std::string(name) +
                        "\" (expected denominator, discordant or drop)");
}

CorrelationResult kendall_darr(const std::vector<JudgmentPair>& judgments,
                               const ScoreMap& scores, TieMode ties) {
  auto score_of = [&](const std::string& system, const std::string& seg_id) {
    const auto it = scores.find({system, seg_id});
    if (it == scores.end()) {
      throw ValidationError("missing score key (system \"" + system + "\", seg_id \"" +
                            seg_id + "\")");
    }
    return it->second;
  };
  CorrelationResult r;
  r.kind = CorrelationResult::Kind::kKendallDarr;
  for (const auto& j : judgments) {
    const double better = score_of(j.better_system, j.seg_id);
    const double worse = score_of(j.worse_system, j.seg_id);
    if (better > worse) {
      ++r.concordant;
    } else if (better < worse) {
      ++r.discordant;
    } else if (ties == TieMode::kDiscordant) {
      ++r.discordant;
    } else if (ties == TieMode::kDenominator) {
      ++r.ties;
    }
  }
  r.n_pairs = r.concordant + r.discordant + r.ties;
  if (r.n_pairs == 0) throw ValidationError("zero usable pairs");
  r.value = (static_cast<double>(r.concordant) - static_cast<double>(r.discordant)) /
            static_cast<double>(r.n_pairs);
  return r;
}

double pearson(const std::vector<double>& xs, const std::vector<double>& ys) {
  if (xs.size() != ys.size()) {
    throw ValidationError("length mismatch: " + std::to_string(xs.size()) + " vs " +
                          std::to_string(ys.size()));
  }
  if (xs.size() < 2) throw ValidationError("pearson needs at least two points");
  const double n = static_cast<double>(xs.size());
  double mx = 0.0, my = 0.0;
  for (size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (size_t i = 0; i < xs.size(); ++i) {
    const double dx = xs[i] - mx;
    const double dy = ys[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) throw ValidationError("zero variance");
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

double average_over_pairs(const std::map<std::string, CorrelationResult>& results) {
  std::map<std::string, double> values;
  for (const auto& [name, r] : results) values.emplace(name, r.value);
  return average_over_pairs(values);
}

double average_over_pairs(const std::map<std::string, double>& values) {
  if (values.empty()) throw ValidationError("nothing to average: no language pairs");
  double sum = 0.0;
  for (const auto& [name, v] : values) sum += v;
  return sum / static_cast<double>(values.size());
}

std::pair<int, double> select_best_layer(const std::map<int, double>& per_layer) {
  if (per_layer.empty()) throw ValidationError("no layers to select from");
  auto best = per_layer.begin();
  for (auto it = per_layer.begin(); it != per_layer.end(); ++it) {
    if (it->second > best->second) best = it;  // strict: lowest index wins ties
  }
  return *best;
}

ScoreMap parse_scores_tsv(std::istream& in, const std::string& source) {
  ScoreMap scores;
  std::string line;
  size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    const auto fields = split_tabs(line);
    if (number == 1 && fields[0] == "system") continue;
    if (fields.size() < 3 || fields[0].empty() || fields[1].empty()) {
      throw ValidationError(at_line(source, number, "malformed line: expected system, seg_id, score"));
    }
    double value = 0.0;
    const auto& f = fields[2];
    const auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), value);
    if (ec != std::errc{} || ptr != f.data() + f.size() || !std::isfinite(value)) {
      throw ValidationError(at_line(source, number, "invalid score \"" + f + "\""));
    }
    if (!scores.emplace(std::make_pair(fields[0], fields[1]), value).second) {
      throw ValidationError(at_line(source, number, "duplicate key (system \"" + fields[0] +
                                                        "\", seg_id \"" + fields[1] + "\")"));
    }
  }
  return scores;
}

ScoreMap load_scores_tsv(const std::filesystem::path& path) {
  auto in = open_input(path);
  return parse_scores_tsv(in, path.string());
}

}  // namespace robeval
