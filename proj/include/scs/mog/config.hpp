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
#include <vector>

namespace scs::mog {

struct MoGConfig {
  std::size_t model_dim = 64;
  std::size_t num_heads = 4;
  // One dilation rate per granularity branch, strictly increasing.
  std::vector<int> dilations{1, 2, 3, 4};
  double layernorm_eps = 1e-5;

  std::size_t head_dim() const { return model_dim / num_heads; }
  std::size_t granularities() const { return dilations.size(); }

  // Throws scs::ValidationError when an invariant fails.
  void validate() const;

  // dilations {1, ..., g}
  static MoGConfig with_granularities(std::size_t model_dim, std::size_t num_heads, std::size_t g);
};

}  // namespace scs::mog
