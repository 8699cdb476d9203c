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
#include <span>
#include <string>
#include <vector>

namespace robeval {

// Dense row-major matrix.
template <typename T>
class BasicMatrix {
 public:
  BasicMatrix() = default;
  BasicMatrix(size_t rows, size_t cols, T fill = T{})
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
  BasicMatrix(size_t rows, size_t cols, std::vector<T> data);

  size_t rows() const { return rows_; }
  size_t cols() const { return cols_; }
  bool empty() const { return rows_ == 0 || cols_ == 0; }

  T& operator()(size_t r, size_t c) { return data_[r * cols_ + c]; }
  const T& operator()(size_t r, size_t c) const { return data_[r * cols_ + c]; }

  std::span<T> row(size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const T> row(size_t r) const { return {data_.data() + r * cols_, cols_}; }

  std::span<const T> data() const { return data_; }
  std::span<T> data() { return data_; }

  friend bool operator==(const BasicMatrix&, const BasicMatrix&) = default;

 private:
  size_t rows_ = 0;
  size_t cols_ = 0;
  std::vector<T> data_;
};

extern template class BasicMatrix<float>;
extern template class BasicMatrix<double>;

using Matrix = BasicMatrix<float>;
using SimilarityMatrix = BasicMatrix<double>;

// Per-layer token embeddings for one sentence. layer_ids[k] is the encoder
// layer that layers[k] came from (0 = static embeddings, 1 = first block,
// ...). A provider may return a subset of layers, kept in ascending order.
struct EmbeddingStack {
  std::vector<std::string> tokens;
  size_t dim = 0;
  std::vector<int> layer_ids;
  std::vector<Matrix> layers;

  // nullptr when the layer is not part of this stack.
  const Matrix* find_layer(int layer_id) const;

  // Throws ValidationError if shapes or ids are inconsistent.
  void validate() const;

  friend bool operator==(const EmbeddingStack&, const EmbeddingStack&) = default;
};

}  // namespace robeval
