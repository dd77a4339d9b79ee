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

// Mixture-of-Granularity attention. One set of logits A = QK^T / sqrt(d_k) is
// shared by all branches; branch g applies the dilation mask M^(g) before the
// softmax, and a gate computed from the pooled, normalised input mixes the
// branch outputs with per-sample convex weights.

#include <string>
#include <vector>

#include "scs/mog/config.hpp"
#include "scs/mog/mask.hpp"
#include "scs/numerics/ops.hpp"
#include "scs/numerics/parameter_set.hpp"

namespace scs::mog {

// Query/key/value projections, each [D x D], no bias.
struct ProjectionParams {
  Parameter* w_q = nullptr;
  Parameter* w_k = nullptr;
  Parameter* w_v = nullptr;

  static ProjectionParams create(ParameterSet& set, const std::string& prefix, std::size_t dim,
                                 RngState& rng);
};

// Gate: W [D x G], b [G].
struct GateParams {
  Parameter* w = nullptr;
  Parameter* b = nullptr;

  static GateParams create(ParameterSet& set, const std::string& prefix, std::size_t dim,
                           std::size_t granularities, RngState& rng);
};

struct MoGParams {
  ProjectionParams proj;
  GateParams gate;

  static MoGParams create(ParameterSet& set, const std::string& prefix, const MoGConfig& cfg,
                          RngState& rng);
};

// Graph-bound views of the weights for one forward pass.
struct ProjectionWeights {
  Var w_q, w_k, w_v;
  static ProjectionWeights bind(const ProjectionParams& p);
};

struct MoGWeights {
  ProjectionWeights proj;
  Var gate_w, gate_b;
  static MoGWeights bind(const MoGParams& p);
};

struct AttentionLogits {
  Var q;  // [B x H x Nq x d_k]
  Var k;  // [B x H x Nk x d_k]
  Var v;  // [B x H x Nk x d_k]
  Var a;  // [B x H x Nq x Nk]
};

// Projects and splits heads, then A = QK^T / sqrt(d_k). Self attention passes
// the same tensor for both arguments.
AttentionLogits attention_logits(const Var& x_query, const Var& x_kv, const ProjectionWeights& w,
                                 std::size_t heads);

// softmax(A + log M) V with heads merged back to [B x Nq x D].
Var branch_attention(const Var& a, const GranularityMask& mask, const Var& v);

// softmax(layernorm(mean(x, 1)) W + b) -> [B x G]
Var gate_weights(const Var& x, const Var& w, const Var& b, double eps = ops::kDefaultLayerNormEps);

// Plain multi-head attention (no mask), [B x Nq x D].
Var standard_attention(const Var& x_query, const Var& x_kv, const ProjectionWeights& w,
                       std::size_t heads);

struct MoGTrace {
  Var output;                 // [B x N x D]
  Var gamma;                  // [B x G]
  std::vector<Var> branches;  // G x [B x N x D]
};

// Self attention over x [B x N x D].
MoGTrace mog_forward_traced(const Var& x, const MoGConfig& cfg, const MoGWeights& w);
Var mog_forward(const Var& x, const MoGConfig& cfg, const MoGWeights& w);

// Queries [B x Q x D] attend to memory [B x N x D]; the dilation mask runs
// over (query index, memory index) and the gate pools the memory.
MoGTrace mog_cross_traced(const Var& queries, const Var& memory, const MoGConfig& cfg,
                          const MoGWeights& w);
Var mog_cross(const Var& queries, const Var& memory, const MoGConfig& cfg, const MoGWeights& w);

}  // namespace scs::mog
