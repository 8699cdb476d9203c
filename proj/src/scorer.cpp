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

#include "robeval/scorer.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <thread>

#include "robeval/codec.hpp"
#include "robeval/corpusio.hpp"
#include "robeval/error.hpp"

namespace robeval {

LayerPolicy LayerPolicy::fixed(int index) {
  if (index < 1) throw ValidationError("fixed layer index must be at least 1");
  LayerPolicy p;
  p.kind = Kind::kFixed;
  p.index = index;
  return p;
}

LayerPolicy LayerPolicy::default_best(std::string model) {
  const auto best = default_best_layer(model);
  if (!best) throw ValidationError("no default best layer known for model \"" + model + "\"");
  LayerPolicy p;
  p.kind = Kind::kDefaultBest;
  p.index = *best;
  p.model = std::move(model);
  return p;
}

LayerPolicy LayerPolicy::mean_all(bool include_static) {
  LayerPolicy p;
  p.kind = Kind::kMeanAll;
  p.include_static = include_static;
  return p;
}

LayerPolicy LayerPolicy::parse(std::string_view text, std::string_view model) {
  if (text == "first") return first();
  if (text == "mean") return mean_all(true);
  if (text == "mean-no-static") return mean_all(false);
  if (text == "best") return default_best(std::string(model));
  int index = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), index);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw ValidationError("unknown layer policy \"" + std::string(text) +
                          "\" (expected first, mean, best or a layer number)");
  }
  return fixed(index);
}

std::string LayerPolicy::label() const {
  switch (kind) {
    case Kind::kFirst: return "first";
    case Kind::kFixed: return std::to_string(index);
    case Kind::kDefaultBest: return "best";
    case Kind::kMeanAll: return include_static ? "mean" : "mean-no-static";
  }
  return "unknown";
}

std::optional<int> default_best_layer(std::string_view model) {
  if (model == "bert-base-uncased") return 9;
  if (model == "byt5-small") return 1;
  if (model == "byt5-base") return 17;
  if (model == "byt5-large") return 30;
  return std::nullopt;
}

LayerRequest required_layers(const LayerPolicy& policy) {
  switch (policy.kind) {
    case LayerPolicy::Kind::kFirst: return std::vector<int>{1};
    case LayerPolicy::Kind::kFixed:
    case LayerPolicy::Kind::kDefaultBest: return std::vector<int>{policy.index};
    case LayerPolicy::Kind::kMeanAll: return std::nullopt;
  }
  return std::nullopt;
}

double f1_of(double precision, double recall) {
  const double sum = precision + recall;
  return sum > 0.0 ? 2.0 * precision * recall / sum : 0.0;
}

std::string MetricConfig::label() const {
  return std::string(to_string(provider.kind)) + ":" + provider.model + ":" + policy.label();
}

Matrix select_layer(const EmbeddingStack& stack, const LayerPolicy& policy) {
  if (stack.layers.empty()) throw ValidationError("embedding stack has no layers");
  if (policy.kind != LayerPolicy::Kind::kMeanAll) {
    const int id = policy.kind == LayerPolicy::Kind::kFirst ? 1 : policy.index;
    const Matrix* m = stack.find_layer(id);
    if (m == nullptr) {
      throw ValidationError("layer " + std::to_string(id) + " is absent (stack has " +
                            std::to_string(stack.layers.size()) + " layers)");
    }
    return *m;
  }
  std::vector<const Matrix*> used;
  for (size_t k = 0; k < stack.layers.size(); ++k) {
    if (stack.layer_ids[k] == 0 && !policy.include_static) continue;
    used.push_back(&stack.layers[k]);
  }
  if (used.empty()) throw ValidationError("no layers to average");
  const size_t rows = used.front()->rows();
  const size_t cols = used.front()->cols();
  std::vector<double> sum(rows * cols, 0.0);
  for (const Matrix* m : used) {
    const auto data = m->data();
    for (size_t i = 0; i < data.size(); ++i) sum[i] += data[i];
  }
  Matrix mean(rows, cols);
  auto out = mean.data();
  for (size_t i = 0; i < out.size(); ++i) {
    out[i] = static_cast<float>(sum[i] / static_cast<double>(used.size()));
  }
  return mean;
}

SimilarityMatrix cosine_matrix(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.cols()) {
    throw ValidationError("dimension mismatch: " + std::to_string(a.cols()) + " vs " +
                          std::to_string(b.cols()));
  }
  auto norms = [](const Matrix& m) {
    std::vector<double> n(m.rows());
    for (size_t i = 0; i < m.rows(); ++i) {
      double s = 0.0;
      for (float x : m.row(i)) s += static_cast<double>(x) * x;
      n[i] = std::sqrt(s);
    }
    return n;
  };
  const auto na = norms(a);
  const auto nb = norms(b);
  SimilarityMatrix sim(a.rows(), b.rows());
  for (size_t i = 0; i < a.rows(); ++i) {
    const auto ai = a.row(i);
    for (size_t j = 0; j < b.rows(); ++j) {
      if (na[i] < 1e-12 || nb[j] < 1e-12) continue;
      const auto bj = b.row(j);
      double dot = 0.0;
      for (size_t k = 0; k < ai.size(); ++k) dot += static_cast<double>(ai[k]) * bj[k];
      sim(i, j) = std::clamp(dot / (na[i] * nb[j]), -1.0, 1.0);
    }
  }
  return sim;
}

ScoreTriple greedy_score(const SimilarityMatrix& sim) {
  if (sim.rows() == 0 || sim.cols() == 0) throw ValidationError("empty sides");
  std::vector<double> col_max(sim.cols(), -std::numeric_limits<double>::infinity());
  double row_sum = 0.0;
  for (size_t i = 0; i < sim.rows(); ++i) {
    double row_max = -std::numeric_limits<double>::infinity();
    for (size_t j = 0; j < sim.cols(); ++j) {
      const double v = sim(i, j);
      row_max = std::max(row_max, v);
      col_max[j] = std::max(col_max[j], v);
    }
    row_sum += row_max;
  }
  double col_sum = 0.0;
  for (double v : col_max) col_sum += v;
  ScoreTriple s;
  s.recall = row_sum / static_cast<double>(sim.rows());
  s.precision = col_sum / static_cast<double>(sim.cols());
  s.f1 = f1_of(s.precision, s.recall);
  return s;
}

Scorer::Scorer(MetricConfig config)
    : config_(std::move(config)), provider_(config_.provider) {
  if (config_.policy.kind == LayerPolicy::Kind::kFixed ||
      config_.policy.kind == LayerPolicy::Kind::kDefaultBest ||
      config_.policy.kind == LayerPolicy::Kind::kFirst) {
    const int id = config_.policy.kind == LayerPolicy::Kind::kFirst ? 1 : config_.policy.index;
    if (config_.provider.kind == ProviderKind::kToy &&
        id >= static_cast<int>(config_.provider.toy.num_layers)) {
      throw ValidationError("layer " + std::to_string(id) + " is absent: toy provider has layers 0.." +
                            std::to_string(config_.provider.toy.num_layers - 1));
    }
  }
}

Scorer::SimilarityView Scorer::similarity(std::string_view candidate,
                                          std::string_view reference) {
  const LayerRequest layers = required_layers(config_.policy);
  const EmbeddingStack ref = provider_.get_stack(reference, layers);
  const EmbeddingStack cand = provider_.get_stack(candidate, layers);
  if (ref.tokens.empty() || cand.tokens.empty()) {
    throw ValidationError("empty side: " + std::string(ref.tokens.empty() ? "reference" : "candidate") +
                          " has no tokens");
  }
  return {ref.tokens, cand.tokens,
          cosine_matrix(select_layer(ref, config_.policy), select_layer(cand, config_.policy))};
}

ScoreTriple Scorer::score_pair(std::string_view candidate, std::string_view reference) {
  return greedy_score(similarity(candidate, reference).sim);
}

void Scorer::export_similarity_matrix(std::string_view candidate, std::string_view reference,
                                      const std::filesystem::path& path) {
  const SimilarityView view = similarity(candidate, reference);
  auto out = open_output(path);
  for (const auto& token : view.candidate_tokens) out << ',' << csv_field(token);
  out << '\n';
  for (size_t i = 0; i < view.reference_tokens.size(); ++i) {
    out << csv_field(view.reference_tokens[i]);
    for (size_t j = 0; j < view.candidate_tokens.size(); ++j) {
      out << ',' << format_fixed(view.sim(i, j), 6);
    }
    out << '\n';
  }
  out.flush();
  if (!out) throw IoError("failed writing " + path.string());
}

std::vector<Scorer::BatchItem> Scorer::score_batch(
    const std::vector<std::pair<std::string, std::string>>& candidate_reference,
    size_t workers) {
  std::vector<BatchItem> items(candidate_reference.size());
  if (items.empty()) return items;

  if (config_.provider.kind == ProviderKind::kRemote) {
    std::vector<std::string> texts;
    texts.reserve(2 * candidate_reference.size());
    for (const auto& [cand, ref] : candidate_reference) {
      texts.push_back(cand);
      texts.push_back(ref);
    }
    provider_.prefetch(texts, required_layers(config_.policy));
  }

  std::atomic<size_t> next{0};
  auto work = [&] {
    for (size_t i = next++; i < items.size(); i = next++) {
      try {
        items[i].score = score_pair(candidate_reference[i].first, candidate_reference[i].second);
      } catch (const Error& e) {
        items[i].error = e.what();
      }
    }
  };
  workers = std::clamp<size_t>(workers, 1, items.size());
  if (workers == 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (size_t w = 0; w < workers; ++w) pool.emplace_back(work);
  }
  return items;
}

std::string csv_field(std::string_view text) {
  if (text.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(text);
  std::string out = "\"";
  for (char c : text) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

}  // namespace robeval
