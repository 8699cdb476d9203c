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
#include <atomic>
#include <exception>
#include <thread>

#include "httplib.h"
#include "robeval/codec.hpp"
#include "robeval/error.hpp"
#include "robeval/providers.hpp"

namespace robeval {
namespace {

httplib::Client make_client(const RemoteParams& params) {
  httplib::Client client(params.endpoint);
  if (!client.is_valid()) {
    throw ValidationError("invalid endpoint \"" + params.endpoint + "\"");
  }
  const auto seconds = params.timeout_ms / 1000;
  const auto micros = (params.timeout_ms % 1000) * 1000;
  client.set_connection_timeout(seconds, micros);
  client.set_read_timeout(seconds, micros);
  client.set_write_timeout(seconds, micros);
  client.set_keep_alive(false);
  return client;
}

nlohmann::json checked_json(const httplib::Result& result, const std::string& what,
                            const std::string& endpoint) {
  if (!result) {
    throw RemoteError(what + " to " + endpoint + " failed: " +
                      httplib::to_string(result.error()));
  }
  if (result->status < 200 || result->status >= 300) {
    std::string body = result->body.substr(0, 200);
    throw RemoteError(what + " returned HTTP " + std::to_string(result->status) +
                      (body.empty() ? "" : ": " + body));
  }
  try {
    return nlohmann::json::parse(result->body);
  } catch (const nlohmann::json::parse_error& e) {
    throw RemoteError(what + " returned malformed JSON: " + e.what());
  }
}

}  // namespace

RemoteClient::RemoteClient(RemoteParams params, std::string model)
    : params_(std::move(params)), model_(std::move(model)) {
  if (params_.endpoint.empty()) throw ValidationError("remote provider needs an endpoint");
  if (params_.max_in_flight == 0) throw ValidationError("max_in_flight must be positive");
  if (params_.batch_size == 0) throw ValidationError("batch_size must be positive");
  if (params_.timeout_ms <= 0) throw ValidationError("timeout_ms must be positive");
}

std::vector<RemoteModelInfo> RemoteClient::models() const {
  auto client = make_client(params_);
  const auto body = checked_json(client.Get("/models"), "GET /models", params_.endpoint);
  std::vector<RemoteModelInfo> infos;
  try {
    const auto& list = body.is_array() ? body : body.at("models");
    for (const auto& m : list) {
      infos.push_back({m.at("name").get<std::string>(), m.at("depth").get<int>(),
                       m.at("dim").get<size_t>(), m.value("tokenizer", std::string())});
    }
  } catch (const nlohmann::json::exception& e) {
    throw RemoteError(std::string("GET /models: unexpected response: ") + e.what());
  }
  return infos;
}

std::vector<EmbeddingStack> RemoteClient::embed_batch(std::span<const std::string> texts,
                                                      std::span<const int> layers) const {
  nlohmann::json request;
  request["model"] = model_;
  request["texts"] = std::vector<std::string>(texts.begin(), texts.end());
  request["layers"] = std::vector<int>(layers.begin(), layers.end());
  request["strip_special"] = params_.strip_special;

  auto client = make_client(params_);
  const auto body = checked_json(client.Post("/embed", request.dump(), "application/json"),
                                 "POST /embed", params_.endpoint);

  std::vector<EmbeddingStack> stacks;
  try {
    const size_t dim = body.at("dim").get<size_t>();
    const auto& results = body.at("results");
    if (!results.is_array() || results.size() != texts.size()) {
      throw RemoteError("POST /embed returned " + std::to_string(results.size()) +
                        " results for " + std::to_string(texts.size()) + " texts");
    }
    for (const auto& item : results) {
      EmbeddingStack stack;
      stack.tokens = item.at("tokens").get<std::vector<std::string>>();
      stack.dim = dim;
      const auto& payloads = item.at("layers");
      for (int id : layers) {
        const auto it = payloads.find(std::to_string(id));
        if (it == payloads.end()) {
          throw RemoteError("POST /embed response lacks layer " + std::to_string(id));
        }
        const auto bytes = base64_decode(it->get<std::string>());
        auto values = bytes ? unpack_f32_le(*bytes) : std::nullopt;
        if (!values) throw RemoteError("layer " + std::to_string(id) + ": invalid payload");
        if (values->size() != stack.tokens.size() * dim) {
          throw RemoteError("shape mismatch in layer " + std::to_string(id) + ": " +
                            std::to_string(values->size()) + " floats for " +
                            std::to_string(stack.tokens.size()) + " tokens x " +
                            std::to_string(dim));
        }
        stack.layer_ids.push_back(id);
        stack.layers.emplace_back(stack.tokens.size(), dim, std::move(*values));
      }
      stacks.push_back(std::move(stack));
    }
  } catch (const nlohmann::json::exception& e) {
    throw RemoteError(std::string("POST /embed: unexpected response: ") + e.what());
  }
  return stacks;
}

std::vector<EmbeddingStack> RemoteClient::embed(std::span<const std::string> texts,
                                                std::span<const int> layers) const {
  std::vector<int> wanted(layers.begin(), layers.end());
  std::sort(wanted.begin(), wanted.end());
  wanted.erase(std::unique(wanted.begin(), wanted.end()), wanted.end());
  if (wanted.empty()) throw ValidationError("no layers requested");
  if (wanted.front() < 0) throw ValidationError("layer indices must be non-negative");
  if (texts.empty()) return {};

  const size_t batch = params_.batch_size;
  const size_t n_batches = (texts.size() + batch - 1) / batch;
  std::vector<std::vector<EmbeddingStack>> results(n_batches);
  std::vector<std::exception_ptr> errors(n_batches);
  std::atomic<size_t> next{0};

  // Each worker owns one request at a time, so the worker count bounds the
  // number of requests in flight.
  auto work = [&] {
    for (size_t b = next++; b < n_batches; b = next++) {
      const size_t begin = b * batch;
      const size_t count = std::min(batch, texts.size() - begin);
      try {
        results[b] = embed_batch(texts.subspan(begin, count), wanted);
      } catch (...) {
        errors[b] = std::current_exception();
      }
    }
  };
  const size_t workers = std::min(params_.max_in_flight, n_batches);
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (size_t w = 0; w < workers; ++w) pool.emplace_back(work);
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  std::vector<EmbeddingStack> stacks;
  stacks.reserve(texts.size());
  for (auto& r : results) {
    for (auto& s : r) stacks.push_back(std::move(s));
  }
  return stacks;
}

}  // namespace robeval
