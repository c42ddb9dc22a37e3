// Copyright 2026 The dscreen Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef DSCREEN_TENSOR_H_
#define DSCREEN_TENSOR_H_

#include <algorithm>
#include <cstddef>
#include <functional>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace dscreen {

// Dense row-major tensor. Every extent is >= 1.
template <typename Scalar>
class BasicTensor {
 public:
  using value_type = Scalar;

  BasicTensor() = default;

  explicit BasicTensor(std::vector<std::size_t> shape)
      : shape_(std::move(shape)), data_(CheckedSize(shape_), Scalar{0}) {}

  BasicTensor(std::vector<std::size_t> shape, std::vector<Scalar> data)
      : shape_(std::move(shape)), data_(std::move(data)) {
    if (data_.size() != CheckedSize(shape_)) {
      throw std::invalid_argument("tensor data size does not match shape");
    }
  }

  const std::vector<std::size_t>& shape() const { return shape_; }
  std::size_t rank() const { return shape_.size(); }
  std::size_t dim(std::size_t axis) const { return shape_.at(axis); }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  std::span<Scalar> data() { return data_; }
  std::span<const Scalar> data() const { return data_; }

  Scalar& operator[](std::size_t i) { return data_[i]; }
  const Scalar& operator[](std::size_t i) const { return data_[i]; }

  // Rank-2 access.
  Scalar& at(std::size_t r, std::size_t c) { return data_[r * shape_[1] + c]; }
  const Scalar& at(std::size_t r, std::size_t c) const {
    return data_[r * shape_[1] + c];
  }

  // Contiguous slice along the leading axis.
  std::span<Scalar> row(std::size_t r) {
    std::size_t stride = data_.size() / shape_[0];
    return std::span<Scalar>(data_).subspan(r * stride, stride);
  }
  std::span<const Scalar> row(std::size_t r) const {
    std::size_t stride = data_.size() / shape_[0];
    return std::span<const Scalar>(data_).subspan(r * stride, stride);
  }

  void Fill(Scalar value) { std::fill(data_.begin(), data_.end(), value); }

  friend bool operator==(const BasicTensor&, const BasicTensor&) = default;

 private:
  static std::size_t CheckedSize(const std::vector<std::size_t>& shape) {
    if (shape.empty()) throw std::invalid_argument("tensor needs a shape");
    for (std::size_t extent : shape) {
      if (extent == 0) throw std::invalid_argument("tensor extent is zero");
    }
    return std::accumulate(shape.begin(), shape.end(), std::size_t{1},
                           std::multiplies<>());
  }

  std::vector<std::size_t> shape_;
  std::vector<Scalar> data_;
};

// Trainable parameter: value plus a gradient buffer of the same shape.
template <typename Scalar>
struct BasicParamTensor {
  std::string name;
  BasicTensor<Scalar> value;
  BasicTensor<Scalar> grad;
  // Weight decay applies to weights, never to biases.
  bool decayed = true;
  // Leading rows that are never updated (the w0 embedding row).
  std::size_t frozen_rows = 0;

  BasicParamTensor() = default;
  BasicParamTensor(std::string param_name, std::vector<std::size_t> shape,
                   bool decay = true, std::size_t frozen = 0)
      : name(std::move(param_name)),
        value(shape),
        grad(shape),
        decayed(decay),
        frozen_rows(frozen) {}
};

using Tensor = BasicTensor<float>;
using ParamTensor = BasicParamTensor<float>;

}  // namespace dscreen

#endif  // DSCREEN_TENSOR_H_
