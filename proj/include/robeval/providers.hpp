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

// Sources of per-layer embeddings: a deterministic toy embedder, a JSONL
// cache and an HTTP client for the embedding sidecar, behind one facade.

#include <atomic>
#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "json.hpp"
#include "robeval/embedding.hpp"

namespace robeval {

enum class ProviderKind { kToy, kCache, kRemote };

std::string_view to_string(ProviderKind kind);
ProviderKind parse_provider_kind(std::string_view name);

struct ToyParams {
  size_t dim = 32;
  // Layer ids 0 .. num_layers - 1.
  size_t num_layers = 4;
  // Weight of the sentence-mean term mixed into every block.
  double context_weight = 2.0;
};

struct RemoteParams {
  std::string endpoint;  // "http://host:port"
  int timeout_ms = 30000;
  size_t max_in_flight = 4;
  size_t batch_size = 32;
  bool strip_special = true;
};

struct ProviderConfig {
  ProviderKind kind = ProviderKind::kToy;
  std::string model = "toy";
  ToyParams toy;
  RemoteParams remote;
  // Empty: no caching (required for kind == kCache).
  std::filesystem::path cache_path;

  // Throws ValidationError.
  void validate() const;

  // Keys: kind, model, dim, num_layers, context_weight, cache, endpoint,
  // timeout_ms, max_in_flight, batch_size, strip_special. Missing keys keep
  // their defaults; unknown keys are rejected.
  static ProviderConfig from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;
};

// tokens = pretokenize(text) without case folding. Layer 0 row for token t:
//   x[j] = unit(mix64(fnv1a64(utf8(t) || 0x00 || leb128(j)))),
//   unit(h) = h / 2^63 - 1, then L2-normalized.
// Layer l >= 1: u[j] = v[j] + v[(j + 1) % dim] + c * m[j], where v is the
// token's layer l-1 row and m the mean of all layer l-1 rows; L2-normalized.
EmbeddingStack toy_embed(std::string_view text, const ToyParams& params);

// Layer-0 component j of a token, before normalization.
double toy_raw_component(std::string_view token, size_t j);

// sha256(model || 0x00 || text), lowercase hex.
std::string cache_key(std::string_view model, std::string_view text);

struct CacheRecord {
  std::string key;
  std::string model;
  std::vector<std::string> tokens;
  size_t dim = 0;
  std::map<int, Matrix> layers;

  friend bool operator==(const CacheRecord&, const CacheRecord&) = default;
};

// One JSONL line, without the trailing newline.
std::string encode_cache_record(const CacheRecord& record);
// Throws ValidationError mentioning `source:line` on any defect.
CacheRecord decode_cache_record(std::string_view line, const std::string& source,
                                size_t line_number);

CacheRecord record_from_stack(std::string key, std::string model,
                              const EmbeddingStack& stack);
EmbeddingStack stack_from_record(const CacheRecord& record);

// Append-only JSONL store. The file is read once on construction; later
// lines for a key replace earlier ones. Safe for concurrent use within a
// process: put() holds an exclusive lock while appending one flushed line.
class EmbeddingCache {
 public:
  explicit EmbeddingCache(std::filesystem::path path);

  std::optional<CacheRecord> get(const std::string& key) const;
  void put(const CacheRecord& record);
  size_t size() const;
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
  mutable std::shared_mutex mutex_;
  std::unordered_map<std::string, CacheRecord> index_;
};

struct RemoteModelInfo {
  std::string name;
  int depth = 0;
  size_t dim = 0;
  std::string tokenizer;
};

// Client for the sidecar's /embed and /models endpoints. Thread-safe; every
// call opens its own connections.
class RemoteClient {
 public:
  RemoteClient(RemoteParams params, std::string model);

  // One stack per text holding exactly the requested layers (deduplicated,
  // ascending). Texts are sent in batches of params.batch_size with at most
  // params.max_in_flight requests outstanding. Throws RemoteError.
  std::vector<EmbeddingStack> embed(std::span<const std::string> texts,
                                    std::span<const int> layers) const;

  std::vector<RemoteModelInfo> models() const;

  const RemoteParams& params() const { return params_; }

 private:
  std::vector<EmbeddingStack> embed_batch(std::span<const std::string> texts,
                                          std::span<const int> layers) const;

  RemoteParams params_;
  std::string model_;
};

// Layers wanted from a provider; nullopt means every layer it has.
using LayerRequest = std::optional<std::vector<int>>;

struct ProviderStats {
  size_t cache_hits = 0;
  size_t cache_misses = 0;
  size_t remote_requests = 0;
  size_t toy_computed = 0;
};

// Cache-through facade: cache (when configured) -> remote or toy.
class EmbeddingProvider {
 public:
  explicit EmbeddingProvider(ProviderConfig config);

  const ProviderConfig& config() const { return config_; }

  // Deepest layer id, when the provider can tell (toy, remote).
  std::optional<int> depth() const;

  EmbeddingStack get_stack(std::string_view text, const LayerRequest& layers);

  // Fetches missing stacks in remote batches and writes them to the cache.
  // A no-op for toy and cache-only providers.
  void prefetch(std::span<const std::string> texts, const LayerRequest& layers);

  ProviderStats stats() const;

 private:
  std::vector<int> resolve(const LayerRequest& layers) const;
  std::optional<EmbeddingStack> lookup(const std::string& key,
                                       const std::vector<int>& layers);
  void store(const std::string& key, const EmbeddingStack& stack);

  ProviderConfig config_;
  std::unique_ptr<EmbeddingCache> cache_;
  std::unique_ptr<RemoteClient> remote_;
  mutable std::once_flag depth_once_;
  mutable std::optional<int> depth_;
  std::atomic<size_t> cache_hits_{0};
  std::atomic<size_t> cache_misses_{0};
  std::atomic<size_t> remote_requests_{0};
  std::atomic<size_t> toy_computed_{0};
};

// Keeps only the listed layers; throws ValidationError if one is missing.
EmbeddingStack subset_layers(const EmbeddingStack& stack, std::span<const int> layers);

}  // namespace robeval
