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

#include <algorithm>
#include <set>

#include "robeval/error.hpp"
#include "robeval/providers.hpp"

namespace robeval {

std::string_view to_string(ProviderKind kind) {
  switch (kind) {
    case ProviderKind::kToy: return "toy";
    case ProviderKind::kCache: return "cache";
    case ProviderKind::kRemote: return "remote";
  }
  return "unknown";
}

ProviderKind parse_provider_kind(std::string_view name) {
  if (name == "toy") return ProviderKind::kToy;
  if (name == "cache") return ProviderKind::kCache;
  if (name == "remote") return ProviderKind::kRemote;
  throw ValidationError("unknown provider \"" + std::string(name) +
                        "\" (expected toy, cache or remote)");
}

void ProviderConfig::validate() const {
  if (model.empty()) throw ValidationError("provider model name is empty");
  switch (kind) {
    case ProviderKind::kToy:
      if (toy.dim < 2) throw ValidationError("toy dim must be at least 2");
      if (toy.num_layers < 2) throw ValidationError("toy num_layers must be at least 2");
      if (!(toy.context_weight >= 0.0)) {
        throw ValidationError("toy context_weight must be non-negative");
      }
      break;
    case ProviderKind::kCache:
      if (cache_path.empty()) throw ValidationError("cache provider needs a cache path");
      break;
    case ProviderKind::kRemote:
      if (remote.endpoint.empty()) throw ValidationError("remote provider needs an endpoint");
      if (remote.max_in_flight == 0) throw ValidationError("max_in_flight must be positive");
      if (remote.batch_size == 0) throw ValidationError("batch_size must be positive");
      if (remote.timeout_ms <= 0) throw ValidationError("timeout_ms must be positive");
      break;
  }
}

ProviderConfig ProviderConfig::from_json(const nlohmann::json& j) {
  static const std::set<std::string> kKeys = {
      "kind", "model", "dim", "num_layers", "context_weight", "cache",
      "endpoint", "timeout_ms", "max_in_flight", "batch_size", "strip_special"};
  if (!j.is_object()) throw ValidationError("provider config must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    if (!kKeys.contains(key)) throw ValidationError("unknown provider key \"" + key + "\"");
  }
  ProviderConfig cfg;
  try {
    if (j.contains("kind")) cfg.kind = parse_provider_kind(j["kind"].get<std::string>());
    cfg.model = j.value("model", cfg.model);
    cfg.toy.dim = j.value("dim", cfg.toy.dim);
    cfg.toy.num_layers = j.value("num_layers", cfg.toy.num_layers);
    cfg.toy.context_weight = j.value("context_weight", cfg.toy.context_weight);
    cfg.cache_path = j.value("cache", std::string());
    cfg.remote.endpoint = j.value("endpoint", cfg.remote.endpoint);
    cfg.remote.timeout_ms = j.value("timeout_ms", cfg.remote.timeout_ms);
    cfg.remote.max_in_flight = j.value("max_in_flight", cfg.remote.max_in_flight);
    cfg.remote.batch_size = j.value("batch_size", cfg.remote.batch_size);
    cfg.remote.strip_special = j.value("strip_special", cfg.remote.strip_special);
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("invalid provider config: ") + e.what());
  }
  cfg.validate();
  return cfg;
}

nlohmann::json ProviderConfig::to_json() const {
  nlohmann::json j;
  j["kind"] = std::string(to_string(kind));
  j["model"] = model;
  if (kind == ProviderKind::kToy) {
    j["dim"] = toy.dim;
    j["num_layers"] = toy.num_layers;
    j["context_weight"] = toy.context_weight;
  }
  if (kind == ProviderKind::kRemote) {
    j["endpoint"] = remote.endpoint;
    j["timeout_ms"] = remote.timeout_ms;
    j["max_in_flight"] = remote.max_in_flight;
    j["batch_size"] = remote.batch_size;
    j["strip_special"] = remote.strip_special;
  }
  if (!cache_path.empty()) j["cache"] = cache_path.string();
  return j;
}

EmbeddingStack subset_layers(const EmbeddingStack& stack, std::span<const int> layers) {
  EmbeddingStack out;
  out.tokens = stack.tokens;
  out.dim = stack.dim;
  std::vector<int> wanted(layers.begin(), layers.end());
  std::sort(wanted.begin(), wanted.end());
  wanted.erase(std::unique(wanted.begin(), wanted.end()), wanted.end());
  for (int id : wanted) {
    const Matrix* m = stack.find_layer(id);
    if (m == nullptr) {
      throw ValidationError("layer " + std::to_string(id) + " is absent from the stack");
    }
    out.layer_ids.push_back(id);
    out.layers.push_back(*m);
  }
  return out;
}

EmbeddingProvider::EmbeddingProvider(ProviderConfig config) : config_(std::move(config)) {
  config_.validate();
  if (!config_.cache_path.empty()) {
    cache_ = std::make_unique<EmbeddingCache>(config_.cache_path);
  }
  if (config_.kind == ProviderKind::kRemote) {
    remote_ = std::make_unique<RemoteClient>(config_.remote, config_.model);
  }
}

std::optional<int> EmbeddingProvider::depth() const {
  std::call_once(depth_once_, [this] {
    switch (config_.kind) {
      case ProviderKind::kToy:
        depth_ = static_cast<int>(config_.toy.num_layers) - 1;
        break;
      case ProviderKind::kRemote:
        for (const auto& info : remote_->models()) {
          if (info.name == config_.model) depth_ = info.depth;
        }
        if (!depth_) {
          throw ValidationError("sidecar does not serve model \"" + config_.model + "\"");
        }
        break;
      case ProviderKind::kCache:
        break;
    }
  });
  return depth_;
}

std::vector<int> EmbeddingProvider::resolve(const LayerRequest& layers) const {
  if (layers) return *layers;
  const auto d = depth();
  if (!d) return {};  // cache-only: whatever the record holds
  std::vector<int> all(static_cast<size_t>(*d) + 1);
  for (size_t i = 0; i < all.size(); ++i) all[i] = static_cast<int>(i);
  return all;
}

std::optional<EmbeddingStack> EmbeddingProvider::lookup(const std::string& key,
                                                        const std::vector<int>& layers) {
  if (!cache_) return std::nullopt;
  auto record = cache_->get(key);
  if (!record) {
    ++cache_misses_;
    return std::nullopt;
  }
  EmbeddingStack stack = stack_from_record(*record);
  if (layers.empty()) {
    ++cache_hits_;
    return stack;
  }
  for (int id : layers) {
    if (stack.find_layer(id) == nullptr) {
      ++cache_misses_;
      return std::nullopt;
    }
  }
  ++cache_hits_;
  return subset_layers(stack, layers);
}

void EmbeddingProvider::store(const std::string& key, const EmbeddingStack& stack) {
  if (!cache_) return;
  CacheRecord record = record_from_stack(key, config_.model, stack);
  // Keep layers cached earlier for the same text.
  if (auto old = cache_->get(key);
      old && old->tokens == record.tokens && old->dim == record.dim) {
    for (auto& [id, matrix] : old->layers) record.layers.try_emplace(id, std::move(matrix));
  }
  cache_->put(record);
}

EmbeddingStack EmbeddingProvider::get_stack(std::string_view text, const LayerRequest& layers) {
  const std::vector<int> wanted = resolve(layers);
  const std::string key = cache_ ? cache_key(config_.model, text) : std::string();
  if (auto hit = lookup(key, wanted)) return std::move(*hit);

  EmbeddingStack stack;
  switch (config_.kind) {
    case ProviderKind::kCache:
      throw ValidationError("no cached embeddings for model \"" + config_.model +
                            "\" and text \"" + std::string(text.substr(0, 60)) + "\"");
    case ProviderKind::kToy:
      ++toy_computed_;
      stack = toy_embed(text, config_.toy);
      break;
    case ProviderKind::kRemote: {
      ++remote_requests_;
      const std::string owned(text);
      auto stacks = remote_->embed(std::span<const std::string>(&owned, 1), wanted);
      stack = std::move(stacks.at(0));
      break;
    }
  }
  store(key, stack);
  return wanted.empty() ? stack : subset_layers(stack, wanted);
}

void EmbeddingProvider::prefetch(std::span<const std::string> texts, const LayerRequest& layers) {
  if (config_.kind != ProviderKind::kRemote || !cache_) return;
  const std::vector<int> wanted = resolve(layers);
  std::vector<std::string> missing;
  std::set<std::string> seen;
  for (const auto& text : texts) {
    if (!seen.insert(text).second) continue;
    const auto record = cache_->get(cache_key(config_.model, text));
    bool complete = record.has_value();
    for (int id : wanted) {
      if (complete && !record->layers.contains(id)) complete = false;
    }
    if (!complete) missing.push_back(text);
  }
  if (missing.empty()) return;
  const size_t batch = config_.remote.batch_size;
  remote_requests_ += (missing.size() + batch - 1) / batch;
  const auto stacks = remote_->embed(missing, wanted);
  for (size_t i = 0; i < missing.size(); ++i) {
    store(cache_key(config_.model, missing[i]), stacks[i]);
  }
}

ProviderStats EmbeddingProvider::stats() const {
  return {cache_hits_.load(), cache_misses_.load(), remote_requests_.load(),
          toy_computed_.load()};
}

}  // namespace robeval
