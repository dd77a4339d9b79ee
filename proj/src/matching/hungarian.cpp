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
#include "scs/matching/hungarian.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "scs/errors.hpp"

namespace scs::matching {

CostMatrix::CostMatrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), values_(rows * cols, fill) {}

CostMatrix::CostMatrix(std::size_t rows, std::size_t cols, std::vector<double> values)
    : rows_(rows), cols_(cols), values_(std::move(values)) {
  if (values_.size() != rows * cols) {
    throw DimensionError("CostMatrix " + std::to_string(rows) + "x" + std::to_string(cols) + " given " +
                         std::to_string(values_.size()) + " values");
  }
}

namespace {

// Square n x n shortest-augmenting-path solver with potentials.
// Returns row_to_col for a minimum-cost perfect matching.
std::vector<std::size_t> solve_square(const std::vector<double>& c, std::size_t n) {
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0), minv(n + 1);
  std::vector<std::size_t> p(n + 1, 0), way(n + 1, 0);
  std::vector<char> used(n + 1);
  for (std::size_t i = 1; i <= n; ++i) {
    p[0] = i;
    std::size_t j0 = 0;
    std::fill(minv.begin(), minv.end(), inf);
    std::fill(used.begin(), used.end(), 0);
    do {
      used[j0] = 1;
      const std::size_t i0 = p[j0];
      double delta = inf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = c[(i0 - 1) * n + (j - 1)] - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<std::size_t> row_to_col(n);
  for (std::size_t j = 1; j <= n; ++j) row_to_col[p[j] - 1] = j - 1;
  return row_to_col;
}

struct SubProblem {
  const CostMatrix& cost;
  std::vector<std::size_t> rows;
  std::vector<std::size_t> cols;
};

// Optimal pairs of a row/column subset, padded to a square with a constant
// finite sentinel for the dummy side.
std::vector<std::pair<std::size_t, std::size_t>> solve_subset(const SubProblem& sp) {
  const std::size_t r = sp.rows.size(), k = sp.cols.size();
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  if (r == 0 || k == 0) return pairs;
  const std::size_t n = std::max(r, k);
  double largest = 0.0;
  for (std::size_t i : sp.rows)
    for (std::size_t j : sp.cols) largest = std::max(largest, std::abs(sp.cost(i, j)));
  const double sentinel = 2.0 * largest + 1.0;
  std::vector<double> square(n * n, sentinel);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < k; ++j) square[i * n + j] = sp.cost(sp.rows[i], sp.cols[j]);
  const auto row_to_col = solve_square(square, n);
  for (std::size_t i = 0; i < r; ++i) {
    if (row_to_col[i] < k) pairs.emplace_back(sp.rows[i], sp.cols[row_to_col[i]]);
  }
  return pairs;
}

double pair_cost(const CostMatrix& cost, const std::vector<std::pair<std::size_t, std::size_t>>& pairs) {
  double s = 0.0;
  for (const auto& [i, j] : pairs) s += cost(i, j);
  return s;
}

void check_finite(const CostMatrix& cost) {
  for (std::size_t i = 0; i < cost.rows(); ++i)
    for (std::size_t j = 0; j < cost.cols(); ++j)
      if (!std::isfinite(cost(i, j))) {
        throw ValidationError("cost matrix entry (" + std::to_string(i) + ", " + std::to_string(j) +
                              ") is not finite");
      }
}

std::vector<std::size_t> iota(std::size_t n) {
  std::vector<std::size_t> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = i;
  return v;
}

// Lexicographic tie-breaking re-solves one subproblem per candidate pair;
// beyond this size the plain solver's assignment is returned.
constexpr std::size_t kTieBreakLimit = 24;

}  // namespace

double hungarian_cost(const CostMatrix& cost) {
  if (cost.empty()) return 0.0;
  check_finite(cost);
  auto pairs = solve_subset({cost, iota(cost.rows()), iota(cost.cols())});
  std::sort(pairs.begin(), pairs.end());
  return pair_cost(cost, pairs);
}

Assignment hungarian(const CostMatrix& cost) {
  Assignment out;
  if (cost.empty()) return out;
  check_finite(cost);

  auto best = solve_subset({cost, iota(cost.rows()), iota(cost.cols())});
  std::sort(best.begin(), best.end());
  const double optimum = pair_cost(cost, best);
  if (std::max(cost.rows(), cost.cols()) > kTieBreakLimit) {
    out.pairs = std::move(best);
    out.cost = optimum;
    return out;
  }

  const double tol = 1e-10 * (1.0 + std::abs(optimum));
  const std::size_t needed = std::min(cost.rows(), cost.cols());
  std::vector<std::size_t> free_cols = iota(cost.cols());
  double fixed = 0.0;
  std::size_t row = 0;
  while (out.pairs.size() < needed) {
    bool placed = false;
    for (; row < cost.rows() && !placed; ++row) {
      // Rows after this one must still be able to supply the remaining pairs.
      const std::size_t rows_after = cost.rows() - row - 1;
      const std::size_t remaining = needed - out.pairs.size() - 1;
      if (rows_after < remaining) break;
      for (std::size_t ci = 0; ci < free_cols.size(); ++ci) {
        const std::size_t col = free_cols[ci];
        std::vector<std::size_t> rest_cols = free_cols;
        rest_cols.erase(rest_cols.begin() + static_cast<std::ptrdiff_t>(ci));
        std::vector<std::size_t> rest_rows;
        for (std::size_t r = row + 1; r < cost.rows(); ++r) rest_rows.push_back(r);
        auto rest = solve_subset({cost, rest_rows, rest_cols});
        if (rest.size() != remaining) continue;
        std::sort(rest.begin(), rest.end());
        const double total = fixed + cost(row, col) + pair_cost(cost, rest);
        if (total <= optimum + tol) {
          out.pairs.emplace_back(row, col);
          fixed += cost(row, col);
          free_cols.erase(free_cols.begin() + static_cast<std::ptrdiff_t>(ci));
          placed = true;
          break;
        }
      }
    }
    if (!placed) {
      // Only reachable through rounding in the tolerance test.
      out.pairs = std::move(best);
      break;
    }
  }
  out.cost = pair_cost(cost, out.pairs);
  return out;
}

}  // namespace scs::matching
