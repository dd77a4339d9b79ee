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
#include <utility>
#include <vector>

namespace scs::matching {

// rows = predictions, cols = targets; row-major, all entries finite.
class CostMatrix {
 public:
  CostMatrix() = default;
  CostMatrix(std::size_t rows, std::size_t cols, double fill = 0.0);
  CostMatrix(std::size_t rows, std::size_t cols, std::vector<double> values);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool empty() const noexcept { return rows_ == 0 || cols_ == 0; }

  double& operator()(std::size_t r, std::size_t c) { return values_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return values_[r * cols_ + c]; }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> values_;
};

struct Assignment {
  // (prediction, target), sorted by prediction index; size min(rows, cols).
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  // Sum of the selected entries in pair order.
  double cost = 0.0;
};

// Minimum-cost assignment. Among optimal assignments the one whose (row, col)
// pair list is lexicographically smallest is returned.
Assignment hungarian(const CostMatrix& cost);

// Optimal cost only (shortest augmenting path, O(n^3)).
double hungarian_cost(const CostMatrix& cost);

}  // namespace scs::matching
