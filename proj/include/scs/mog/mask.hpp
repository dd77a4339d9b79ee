/* Copyright 2026 The SCS Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/
#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "scs/numerics/tensor.hpp"

namespace scs::mog {

// Binary mask M[i][j] = 1 iff |i - j| mod dilation == 0. Square for self
// attention; rows x cols for cross attention where rows index queries and
// cols index memory tokens.
class GranularityMask {
 public:
  GranularityMask(std::size_t rows, std::size_t cols, int dilation);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t n() const noexcept { return rows_; }
  int dilation() const noexcept { return dilation_; }

  bool at(std::size_t i, std::size_t j) const { return bits_[i * cols_ + j] != 0; }
  // Number of retained (unmasked) pairs.
  std::size_t support() const noexcept { return support_; }
  std::size_t row_support(std::size_t i) const;

  // 0/1 doubles, shape [rows x cols], for ops::masked_softmax.
  const Tensor& as_tensor() const noexcept { return dense_; }

 private:
  std::size_t rows_;
  std::size_t cols_;
  int dilation_;
  std::size_t support_ = 0;
  std::vector<std::uint8_t> bits_;
  Tensor dense_;
};

GranularityMask build_mask(std::size_t n, int dilation);
GranularityMask build_mask(std::size_t rows, std::size_t cols, int dilation);

// Process-wide cache keyed by (rows, cols, dilation); safe for concurrent use.
const GranularityMask& cached_mask(std::size_t rows, std::size_t cols, int dilation);

}  // namespace scs::mog
