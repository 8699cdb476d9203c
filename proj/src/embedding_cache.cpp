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

#include <fstream>

#include "robeval/codec.hpp"
#include "robeval/error.hpp"
#include "robeval/providers.hpp"

namespace robeval {
namespace {

bool is_sha256_hex(std::string_view s) {
  if (s.size() != 64) return false;
  for (char c : s) {
    if (!((c >= '0' && c <= '9') || (c >= 'a' && c <= 'f'))) return false;
  }
  return true;
}

}  // namespace

std::string cache_key(std::string_view model, std::string_view text) {
  std::string data(model);
  data.push_back('\0');
  data.append(text);
  return sha256_hex(data);
}

std::string encode_cache_record(const CacheRecord& record) {
  nlohmann::ordered_json j;
  j["key"] = record.key;
  j["model"] = record.model;
  j["tokens"] = record.tokens;
  j["dim"] = record.dim;
  nlohmann::ordered_json layers = nlohmann::ordered_json::object();
  for (const auto& [id, matrix] : record.layers) {
    layers[std::to_string(id)] = base64_encode(pack_f32_le(matrix.data()));
  }
  j["layers"] = std::move(layers);
  return j.dump();
}

CacheRecord decode_cache_record(std::string_view line, const std::string& source,
                                size_t line_number) {
  auto fail = [&](const std::string& message) -> ValidationError {
    return ValidationError(at_line(source, line_number, message));
  };
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(line);
  } catch (const nlohmann::json::parse_error& e) {
    throw fail(std::string("malformed cache record: ") + e.what());
  }
  CacheRecord record;
  try {
    record.key = j.at("key").get<std::string>();
    record.model = j.at("model").get<std::string>();
    record.tokens = j.at("tokens").get<std::vector<std::string>>();
    record.dim = j.at("dim").get<size_t>();
    const auto& layers = j.at("layers");
    if (!layers.is_object() || layers.empty()) throw fail("cache record has no layers");
    for (const auto& [name, payload] : layers.items()) {
      int id = -1;
      try {
        size_t consumed = 0;
        id = std::stoi(name, &consumed);
        if (consumed != name.size()) id = -1;
      } catch (const std::exception&) {
        id = -1;
      }
      if (id < 0) throw fail("invalid layer index \"" + name + "\"");
      const auto bytes = base64_decode(payload.get<std::string>());
      if (!bytes) throw fail("layer " + name + ": invalid base64 payload");
      auto values = unpack_f32_le(*bytes);
      if (!values || values->size() != record.tokens.size() * record.dim) {
        throw fail("layer " + name + ": shape mismatch, payload has " +
                   std::to_string(bytes->size()) + " bytes for " +
                   std::to_string(record.tokens.size()) + "x" +
                   std::to_string(record.dim) + " floats");
      }
      record.layers.emplace(id, Matrix(record.tokens.size(), record.dim, std::move(*values)));
    }
  } catch (const nlohmann::json::exception& e) {
    throw fail(std::string("malformed cache record: ") + e.what());
  }
  if (!is_sha256_hex(record.key)) throw fail("cache key is not a SHA-256 hex digest");
  if (record.dim == 0) throw fail("cache record has dim 0");
  return record;
}

CacheRecord record_from_stack(std::string key, std::string model,
                              const EmbeddingStack& stack) {
  CacheRecord record{std::move(key), std::move(model), stack.tokens, stack.dim, {}};
  for (size_t k = 0; k < stack.layers.size(); ++k) {
    record.layers.emplace(stack.layer_ids[k], stack.layers[k]);
  }
  return record;
}

EmbeddingStack stack_from_record(const CacheRecord& record) {
  EmbeddingStack stack;
  stack.tokens = record.tokens;
  stack.dim = record.dim;
  for (const auto& [id, matrix] : record.layers) {
    stack.layer_ids.push_back(id);
    stack.layers.push_back(matrix);
  }
  return stack;
}

EmbeddingCache::EmbeddingCache(std::filesystem::path path) : path_(std::move(path)) {
  std::ifstream in(path_, std::ios::binary);
  if (!in) return;  // starts empty; created on first put
  std::string line;
  size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (line.empty()) continue;
    CacheRecord record = decode_cache_record(line, path_.string(), number);
    index_.insert_or_assign(record.key, std::move(record));
  }
}

std::optional<CacheRecord> EmbeddingCache::get(const std::string& key) const {
  std::shared_lock lock(mutex_);
  const auto it = index_.find(key);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

void EmbeddingCache::put(const CacheRecord& record) {
  const std::string line = encode_cache_record(record) + "\n";
  std::unique_lock lock(mutex_);
  if (path_.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path_.parent_path(), ec);
  }
  std::ofstream out(path_, std::ios::binary | std::ios::app);
  if (!out) throw IoError("cannot open cache " + path_.string() + " for appending");
  out.write(line.data(), static_cast<std::streamsize>(line.size()));
  out.flush();
  if (!out) throw IoError("failed appending to cache " + path_.string());
  index_.insert_or_assign(record.key, record);
}

size_t EmbeddingCache::size() const {
  std::shared_lock lock(mutex_);
  return index_.size();
}

}  // namespace robeval
