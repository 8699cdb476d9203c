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

#include <cmath>
#include <cstdint>
#include <vector>

#include "robeval/codec.hpp"
#include "robeval/error.hpp"
#include "robeval/providers.hpp"
#include "robeval/rng.hpp"
#include "robeval/wordpiece.hpp"

namespace robeval {
namespace {

void append_leb128(std::vector<uint8_t>& out, uint64_t value) {
  do {
    uint8_t byte = value & 0x7F;
    value >>= 7;
    if (value != 0) byte |= 0x80;
    out.push_back(byte);
  } while (value != 0);
}

void normalize(std::vector<double>& v) {
  double norm = 0.0;
  for (double x : v) norm += x * x;
  norm = std::sqrt(norm);
  if (norm == 0.0) return;
  for (double& x : v) x /= norm;
}

}  // namespace

double toy_raw_component(std::string_view token, size_t j) {
  std::vector<uint8_t> bytes(token.begin(), token.end());
  bytes.push_back(0x00);
  append_leb128(bytes, j);
  const uint64_t h = mix64(fnv1a64(bytes));
  return static_cast<double>(h) / 0x1.0p63 - 1.0;
}

EmbeddingStack toy_embed(std::string_view text, const ToyParams& params) {
  if (params.dim < 2) throw ValidationError("toy dim must be at least 2");
  if (params.num_layers < 2) throw ValidationError("toy num_layers must be at least 2");
  if (!(params.context_weight >= 0.0)) {
    throw ValidationError("toy context_weight must be non-negative");
  }

  EmbeddingStack stack;
  stack.tokens = pretokenize(text, {.lowercase = false, .strip_accents = false});
  stack.dim = params.dim;
  const size_t n = stack.tokens.size();
  const size_t dim = params.dim;

  std::vector<std::vector<double>> rows(n, std::vector<double>(dim));
  for (size_t t = 0; t < n; ++t) {
    for (size_t j = 0; j < dim; ++j) rows[t][j] = toy_raw_component(stack.tokens[t], j);
    normalize(rows[t]);
  }

  auto emit = [&](int layer_id) {
    Matrix m(n, dim);
    for (size_t t = 0; t < n; ++t) {
      for (size_t j = 0; j < dim; ++j) m(t, j) = static_cast<float>(rows[t][j]);
    }
    stack.layer_ids.push_back(layer_id);
    stack.layers.push_back(std::move(m));
  };
  emit(0);

  for (size_t layer = 1; layer < params.num_layers; ++layer) {
    std::vector<double> mean(dim, 0.0);
    for (const auto& row : rows) {
      for (size_t j = 0; j < dim; ++j) mean[j] += row[j];
    }
    if (n > 0) {
      for (double& x : mean) x /= static_cast<double>(n);
    }
    std::vector<std::vector<double>> next(n, std::vector<double>(dim));
    for (size_t t = 0; t < n; ++t) {
      for (size_t j = 0; j < dim; ++j) {
        next[t][j] = rows[t][j] + rows[t][(j + 1) % dim] + params.context_weight * mean[j];
      }
      normalize(next[t]);
    }
    rows = std::move(next);
    emit(static_cast<int>(layer));
  }
  return stack;
}

}  // namespace robeval
