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

#include "robeval/embedding.hpp"

#include <algorithm>

#include "robeval/error.hpp"

namespace robeval {

template <typename T>
BasicMatrix<T>::BasicMatrix(size_t rows, size_t cols, std::vector<T> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
  if (data_.size() != rows * cols) {
    throw ValidationError("matrix payload has " + std::to_string(data_.size()) +
                          " values, expected " + std::to_string(rows) + "x" +
                          std::to_string(cols));
  }
}

template class BasicMatrix<float>;
template class BasicMatrix<double>;

const Matrix* EmbeddingStack::find_layer(int layer_id) const {
  const auto it = std::find(layer_ids.begin(), layer_ids.end(), layer_id);
  if (it == layer_ids.end()) return nullptr;
  return &layers[static_cast<size_t>(it - layer_ids.begin())];
}

void EmbeddingStack::validate() const {
  if (dim == 0) throw ValidationError("embedding dim must be positive");
  if (layers.empty()) throw ValidationError("embedding stack has no layers");
  if (layer_ids.size() != layers.size()) {
    throw ValidationError("embedding stack has " + std::to_string(layers.size()) +
                          " layers but " + std::to_string(layer_ids.size()) + " layer ids");
  }
  for (size_t k = 0; k < layers.size(); ++k) {
    if (layer_ids[k] < 0 || (k > 0 && layer_ids[k] <= layer_ids[k - 1])) {
      throw ValidationError("layer ids must be non-negative and strictly increasing");
    }
    if (layers[k].rows() != tokens.size() || layers[k].cols() != dim) {
      throw ValidationError("layer " + std::to_string(layer_ids[k]) + " is " +
                            std::to_string(layers[k].rows()) + "x" +
                            std::to_string(layers[k].cols()) + ", expected " +
                            std::to_string(tokens.size()) + "x" + std::to_string(dim));
    }
  }
}

}  // namespace robeval
