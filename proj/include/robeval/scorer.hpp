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

// Greedy-matching similarity score over contextual token embeddings:
// cosine similarity matrix, best-match precision/recall, F1.

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "robeval/embedding.hpp"
#include "robeval/providers.hpp"

namespace robeval {

// Which encoder layer supplies the embeddings.
struct LayerPolicy {
  enum class Kind { kFirst, kFixed, kDefaultBest, kMeanAll };

  Kind kind = Kind::kFirst;
  int index = 1;                 // kFixed
  std::string model;             // kDefaultBest
  bool include_static = true;    // kMeanAll: average layer 0 too

  static LayerPolicy first() { return {}; }
  static LayerPolicy fixed(int index);
  static LayerPolicy default_best(std::string model);
  static LayerPolicy mean_all(bool include_static = true);

  // "first", "mean", "mean-no-static", "best" (needs model), or a layer
  // number >= 1. Throws ValidationError.
  static LayerPolicy parse(std::string_view text, std::string_view model = {});

  // Round-trips through parse(): "first", "mean", "best", "9", ...
  std::string label() const;

  friend bool operator==(const LayerPolicy&, const LayerPolicy&) = default;
};

// Layer selected on WMT16 for BERTScore-style scoring of each known model:
// bert-base-uncased 9, byt5-small 1, byt5-base 17, byt5-large 30.
std::optional<int> default_best_layer(std::string_view model);

// Layers a policy needs from the provider (nullopt: all of them).
LayerRequest required_layers(const LayerPolicy& policy);

struct ScoreTriple {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

// 2PR / (P + R), or 0 when P + R <= 0.
double f1_of(double precision, double recall);

struct MetricConfig {
  ProviderConfig provider;
  LayerPolicy policy;

  // "<provider>:<model>:<layer>", e.g. "toy:toy:first".
  std::string label() const;
};

// First -> layer 1, Fixed(i) / DefaultBest -> layer i, MeanAll -> elementwise
// mean over the stack's layers. Throws ValidationError for absent layers.
Matrix select_layer(const EmbeddingStack& stack, const LayerPolicy& policy);

// (i, j) = cos(a_i, b_j); 0 when either norm is below 1e-12.
SimilarityMatrix cosine_matrix(const Matrix& a, const Matrix& b);

// Rows are reference tokens, columns candidate tokens. Recall averages row
// maxima, precision column maxima. Throws ValidationError("empty sides").
ScoreTriple greedy_score(const SimilarityMatrix& sim);

class Scorer {
 public:
  explicit Scorer(MetricConfig config);

  const MetricConfig& config() const { return config_; }
  EmbeddingProvider& provider() { return provider_; }

  ScoreTriple score_pair(std::string_view candidate, std::string_view reference);

  // Cosine matrix with reference tokens as rows plus both token lists.
  struct SimilarityView {
    std::vector<std::string> reference_tokens;
    std::vector<std::string> candidate_tokens;
    SimilarityMatrix sim;
  };
  SimilarityView similarity(std::string_view candidate, std::string_view reference);

  // CSV: header = empty corner cell then candidate tokens; each row starts
  // with a reference token; cells carry six decimals.
  void export_similarity_matrix(std::string_view candidate, std::string_view reference,
                                const std::filesystem::path& path);

  struct BatchItem {
    std::optional<ScoreTriple> score;
    std::string error;  // set when score is empty
  };
  // Order-preserving. Failures become error records and the batch goes on.
  std::vector<BatchItem> score_batch(
      const std::vector<std::pair<std::string, std::string>>& candidate_reference,
      size_t workers = 1);

 private:
  MetricConfig config_;
  EmbeddingProvider provider_;
};

// RFC 4180 field quoting.
std::string csv_field(std::string_view text);

}  // namespace robeval
