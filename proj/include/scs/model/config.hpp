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

#include <json.hpp>

#include "scs/mog/config.hpp"

namespace scs::model {

struct ModelConfig {
  // mog.model_dim and mog.num_heads are the model width D and head count H.
  mog::MoGConfig mog;
  std::size_t sce_blocks = 2;
  std::size_t scd_blocks = 1;
  std::size_t ssd_blocks = 1;
  std::size_t num_queries = 4;
  std::size_t vocab_size = 0;  // 0 means the builtin vocabulary
  std::size_t image_size = 64;
  std::size_t patch_size = 8;
  std::size_t ffn_mult = 2;

  std::size_t dim() const { return mog.model_dim; }
  std::size_t heads() const { return mog.num_heads; }
  std::size_t patches_per_side() const { return image_size / patch_size; }
  std::size_t num_patches() const { return patches_per_side() * patches_per_side(); }
  std::size_t patch_features() const { return patch_size * patch_size * 3; }
  std::size_t effective_vocab() const;

  void validate() const;
  friend bool operator==(const ModelConfig& a, const ModelConfig& b);
};

nlohmann::json to_json(const ModelConfig& c);
ModelConfig model_config_from_json(const nlohmann::json& j);

}  // namespace scs::model
