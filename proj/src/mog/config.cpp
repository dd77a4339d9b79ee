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
#include "scs/mog/config.hpp"

#include <string>

#include "scs/errors.hpp"

namespace scs::mog {

void MoGConfig::validate() const {
  if (model_dim == 0 || num_heads == 0) throw ValidationError("MoGConfig: model_dim and num_heads must be positive");
  if (model_dim % num_heads != 0) {
    throw ValidationError("MoGConfig: model_dim " + std::to_string(model_dim) +
                          " is not divisible by num_heads " + std::to_string(num_heads));
  }
  if (dilations.empty()) throw ValidationError("MoGConfig: dilation set is empty");
  for (std::size_t g = 0; g < dilations.size(); ++g) {
    if (dilations[g] < 1) throw ValidationError("MoGConfig: dilation " + std::to_string(dilations[g]) + " < 1");
    if (g > 0 && dilations[g] <= dilations[g - 1]) {
      throw ValidationError("MoGConfig: dilations must be strictly increasing");
    }
  }
}

MoGConfig MoGConfig::with_granularities(std::size_t model_dim, std::size_t num_heads, std::size_t g) {
  MoGConfig cfg;
  cfg.model_dim = model_dim;
  cfg.num_heads = num_heads;
  cfg.dilations.clear();
  for (std::size_t i = 1; i <= g; ++i) cfg.dilations.push_back(static_cast<int>(i));
  return cfg;
}

}  // namespace scs::mog
