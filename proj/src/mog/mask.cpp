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
#include "scs/mog/mask.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <shared_mutex>
#include <tuple>

#include "scs/errors.hpp"

namespace scs::mog {

GranularityMask::GranularityMask(std::size_t rows, std::size_t cols, int dilation)
    : rows_(rows), cols_(cols), dilation_(dilation), bits_(rows * cols, 0), dense_({rows, cols}) {
  if (rows == 0 || cols == 0 || dilation < 1) {
    throw ValidationError("GranularityMask needs rows, cols >= 1 and dilation >= 1");
  }
  const auto d = static_cast<std::size_t>(dilation);
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) {
      const std::size_t dist = i > j ? i - j : j - i;
      if (dist % d == 0) {
        bits_[i * cols + j] = 1;
        dense_[i * cols + j] = 1.0;
        ++support_;
      }
    }
  }
}

std::size_t GranularityMask::row_support(std::size_t i) const {
  std::size_t c = 0;
  for (std::size_t j = 0; j < cols_; ++j) c += bits_[i * cols_ + j];
  return c;
}

GranularityMask build_mask(std::size_t n, int dilation) { return GranularityMask(n, n, dilation); }

GranularityMask build_mask(std::size_t rows, std::size_t cols, int dilation) {
  return GranularityMask(rows, cols, dilation);
}

const GranularityMask& cached_mask(std::size_t rows, std::size_t cols, int dilation) {
  using Key = std::tuple<std::size_t, std::size_t, int>;
  static std::shared_mutex mutex;
  static std::map<Key, std::unique_ptr<GranularityMask>> cache;
  const Key key{rows, cols, dilation};
  {
    std::shared_lock lock(mutex);
    if (auto it = cache.find(key); it != cache.end()) return *it->second;
  }
  auto mask = std::make_unique<GranularityMask>(rows, cols, dilation);
  std::unique_lock lock(mutex);
  auto [it, inserted] = cache.try_emplace(key, std::move(mask));
  return *it->second;
}

}  // namespace scs::mog
