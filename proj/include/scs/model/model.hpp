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

// SCS network at toy scale: token projector, scale-comprehensive encoder
// (SCE, MoG self attention), hierarchy fusion, scale-comprehensive decoder
// (SCD, MoG cross attention), scale-sensitive decoder (SSD, plain attention)
// and a sigmoid regression head. All blocks are pre-norm residual blocks.

#include <cstdint>
#include <string>
#include <vector>

#include "scs/data/image.hpp"
#include "scs/model/config.hpp"
#include "scs/mog/attention.hpp"
#include "scs/numerics/parameter_set.hpp"

namespace scs::model {

struct TokenSequence {
  Var visual;    // [B x N_v x D]
  Var text;      // [B x N_l x D], undefined when N_l = 0
  Var combined;  // [B x (N_v + N_l) x D] with positions and modality types added
  std::size_t n_visual = 0;
  std::size_t n_text = 0;
};

struct Prediction {
  Var boxes;       // [B x Q x 4], (cx, cy, w, h)
  Var confidence;  // [B x Q]
};

struct SceOutput {
  Var memory;
  std::vector<Var> per_block;
};

// Sinusoidal table [N x D], deterministic in (N, D).
Tensor positional_encoding(std::size_t n, std::size_t d);

// Flattens non-overlapping patch x patch tiles row-major, channels innermost.
Tensor patchify(const std::vector<const data::Image*>& images, std::size_t patch);

class ScsModel {
 public:
  ScsModel(ModelConfig config, std::uint64_t seed);
  ScsModel(const ScsModel&) = delete;
  ScsModel& operator=(const ScsModel&) = delete;

  const ModelConfig& config() const { return config_; }
  ParameterSet& parameters() { return params_; }
  const ParameterSet& parameters() const { return params_; }

  // Images must share the configured size; id lists must share one length.
  TokenSequence project_tokens(const std::vector<const data::Image*>& images,
                               const std::vector<std::vector<int>>& ids);
  SceOutput sce_forward(const Var& tokens);
  Var fuse_hierarchy(const std::vector<Var>& per_block);
  Var initial_queries(std::size_t batch);
  Var scd_forward(const Var& queries, const Var& memory);
  Var ssd_forward(const Var& coarse, const Var& fused_memory);
  Prediction regression_head(const Var& states);

  Prediction forward(const std::vector<const data::Image*>& images, const std::vector<std::vector<int>>& ids);
  Prediction forward(const data::Image& image, const std::vector<int>& ids);

  // Sets every attention and FFN output projection (and its bias) to zero.
  void zero_output_projections();

  static bool is_projector_parameter(const std::string& name);

 private:
  struct Ffn {
    Parameter* w1;
    Parameter* b1;
    Parameter* w2;
    Parameter* b2;
  };
  struct SceBlock {
    mog::MoGParams attn;
    Parameter* w_o;
    Ffn ffn;
  };
  struct DecoderBlock {
    mog::ProjectionParams self_proj;
    Parameter* self_o;
    mog::MoGParams cross;  // SSD blocks leave the gate unset
    Parameter* cross_o;
    Ffn ffn;
  };

  Ffn make_ffn(const std::string& prefix, RngState& rng);
  Var ffn_forward(const Ffn& f, const Var& x) const;
  DecoderBlock make_decoder_block(const std::string& prefix, bool mog_cross, RngState& rng);

  ModelConfig config_;
  ParameterSet params_;
  Parameter* patch_w_;
  Parameter* patch_b_;
  Parameter* word_emb_;
  Parameter* type_emb_;
  std::vector<SceBlock> sce_;
  Parameter* fuse_logits_;
  Parameter* queries_;
  std::vector<DecoderBlock> scd_;
  std::vector<DecoderBlock> ssd_;
  Parameter* head_w1_;
  Parameter* head_b1_;
  Parameter* head_w2_;
  Parameter* head_b2_;
};

}  // namespace scs::model
