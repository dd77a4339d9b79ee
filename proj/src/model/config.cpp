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
#include "scs/model/config.hpp"

#include "scs/data/tokenizer.hpp"
#include "scs/errors.hpp"

namespace scs::model {

std::size_t ModelConfig::effective_vocab() const {
  return vocab_size ? vocab_size : data::Vocabulary::builtin().size();
}

void ModelConfig::validate() const {
  mog.validate();
  if (sce_blocks < 1 || scd_blocks < 1 || ssd_blocks < 1) throw ValidationError("block counts must be >= 1");
  if (num_queries < 1) throw ValidationError("num_queries must be >= 1");
  if (patch_size == 0 || image_size == 0 || image_size % patch_size != 0) {
    throw ValidationError("image_size " + std::to_string(image_size) + " is not a multiple of patch_size " +
                          std::to_string(patch_size));
  }
  if (ffn_mult < 1) throw ValidationError("ffn_mult must be >= 1");
}

bool operator==(const ModelConfig& a, const ModelConfig& b) {
  return a.mog.model_dim == b.mog.model_dim && a.mog.num_heads == b.mog.num_heads &&
         a.mog.dilations == b.mog.dilations && a.mog.layernorm_eps == b.mog.layernorm_eps &&
         a.sce_blocks == b.sce_blocks && a.scd_blocks == b.scd_blocks && a.ssd_blocks == b.ssd_blocks &&
         a.num_queries == b.num_queries && a.effective_vocab() == b.effective_vocab() && a.image_size == b.image_size &&
         a.patch_size == b.patch_size && a.ffn_mult == b.ffn_mult;
}

nlohmann::json to_json(const ModelConfig& c) {
  return {{"model_dim", c.mog.model_dim},   {"num_heads", c.mog.num_heads},
          {"dilations", c.mog.dilations},   {"layernorm_eps", c.mog.layernorm_eps},
          {"sce_blocks", c.sce_blocks},     {"scd_blocks", c.scd_blocks},
          {"ssd_blocks", c.ssd_blocks},     {"num_queries", c.num_queries},
          {"vocab_size", c.effective_vocab()}, {"image_size", c.image_size},
          {"patch_size", c.patch_size},     {"ffn_mult", c.ffn_mult}};
}

ModelConfig model_config_from_json(const nlohmann::json& j) {
  ModelConfig c;
  try {
    c.mog.model_dim = j.at("model_dim").get<std::size_t>();
    c.mog.num_heads = j.at("num_heads").get<std::size_t>();
    c.mog.dilations = j.at("dilations").get<std::vector<int>>();
    c.mog.layernorm_eps = j.value("layernorm_eps", c.mog.layernorm_eps);
    c.sce_blocks = j.at("sce_blocks").get<std::size_t>();
    c.scd_blocks = j.at("scd_blocks").get<std::size_t>();
    c.ssd_blocks = j.at("ssd_blocks").get<std::size_t>();
    c.num_queries = j.at("num_queries").get<std::size_t>();
    c.vocab_size = j.value("vocab_size", std::size_t{0});
    c.image_size = j.at("image_size").get<std::size_t>();
    c.patch_size = j.at("patch_size").get<std::size_t>();
    c.ffn_mult = j.value("ffn_mult", c.ffn_mult);
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("model config: ") + e.what());
  }
  c.validate();
  return c;
}

}  // namespace scs::model
