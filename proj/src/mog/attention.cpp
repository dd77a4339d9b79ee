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
#include "scs/mog/attention.hpp"

#include <cmath>

#include "scs/errors.hpp"

namespace scs::mog {

ProjectionParams ProjectionParams::create(ParameterSet& set, const std::string& prefix,
                                          std::size_t dim, RngState& rng) {
  ProjectionParams p;
  p.w_q = &set.add(prefix + ".w_q", xavier_uniform(dim, dim, rng));
  p.w_k = &set.add(prefix + ".w_k", xavier_uniform(dim, dim, rng));
  p.w_v = &set.add(prefix + ".w_v", xavier_uniform(dim, dim, rng));
  return p;
}

GateParams GateParams::create(ParameterSet& set, const std::string& prefix, std::size_t dim,
                              std::size_t granularities, RngState& rng) {
  GateParams p;
  p.w = &set.add(prefix + ".gate_w", xavier_uniform(dim, granularities, rng));
  p.b = &set.add(prefix + ".gate_b", Tensor({granularities}));
  return p;
}

MoGParams MoGParams::create(ParameterSet& set, const std::string& prefix, const MoGConfig& cfg,
                            RngState& rng) {
  cfg.validate();
  MoGParams p;
  p.proj = ProjectionParams::create(set, prefix, cfg.model_dim, rng);
  p.gate = GateParams::create(set, prefix, cfg.model_dim, cfg.granularities(), rng);
  return p;
}

ProjectionWeights ProjectionWeights::bind(const ProjectionParams& p) {
  return {leaf(*p.w_q), leaf(*p.w_k), leaf(*p.w_v)};
}

MoGWeights MoGWeights::bind(const MoGParams& p) {
  return {ProjectionWeights::bind(p.proj), leaf(*p.gate.w), leaf(*p.gate.b)};
}

AttentionLogits attention_logits(const Var& x_query, const Var& x_kv, const ProjectionWeights& w,
                                 std::size_t heads) {
  if (x_query.rank() != 3 || x_kv.rank() != 3 || x_query.dim(0) != x_kv.dim(0) ||
      x_query.dim(2) != x_kv.dim(2)) {
    throw DimensionError("attention_logits: query " + shape_to_string(x_query.shape()) + " vs memory " +
                         shape_to_string(x_kv.shape()));
  }
  const std::size_t d = x_query.dim(2);
  if (heads == 0 || d % heads != 0) {
    throw DimensionError("attention_logits: width " + std::to_string(d) + " not divisible into " +
                         std::to_string(heads) + " heads");
  }
  AttentionLogits out;
  out.q = ops::split_heads(ops::linear(x_query, w.w_q), heads);
  out.k = ops::split_heads(ops::linear(x_kv, w.w_k), heads);
  out.v = ops::split_heads(ops::linear(x_kv, w.w_v), heads);
  const double inv_sqrt_dk = 1.0 / std::sqrt(static_cast<double>(d / heads));
  out.a = ops::scale(ops::matmul_nt(out.q, out.k), inv_sqrt_dk);
  return out;
}

Var branch_attention(const Var& a, const GranularityMask& mask, const Var& v) {
  if (a.rank() != 4 || a.dim(2) != mask.rows() || a.dim(3) != mask.cols()) {
    throw DimensionError("branch_attention: logits " + shape_to_string(a.shape()) + " vs mask [" +
                         std::to_string(mask.rows()) + "x" + std::to_string(mask.cols()) + "]");
  }
  Var weights = ops::masked_softmax(a, mask.as_tensor());
  return ops::merge_heads(ops::matmul(weights, v));
}

Var gate_weights(const Var& x, const Var& w, const Var& b, double eps) {
  Var pooled = ops::layernorm(ops::mean_pool(x), eps);
  return ops::softmax(ops::linear(pooled, w, b));
}

Var standard_attention(const Var& x_query, const Var& x_kv, const ProjectionWeights& w,
                       std::size_t heads) {
  AttentionLogits l = attention_logits(x_query, x_kv, w, heads);
  return ops::merge_heads(ops::matmul(ops::softmax(l.a), l.v));
}

namespace {

MoGTrace mixture(const Var& x_query, const Var& x_kv, const MoGConfig& cfg, const MoGWeights& w) {
  cfg.validate();
  if (x_query.dim(2) != cfg.model_dim) {
    throw DimensionError("MoG: input width " + std::to_string(x_query.dim(2)) + " but model_dim is " +
                         std::to_string(cfg.model_dim));
  }
  AttentionLogits l = attention_logits(x_query, x_kv, w.proj, cfg.num_heads);
  MoGTrace trace;
  trace.branches.reserve(cfg.granularities());
  for (int d : cfg.dilations) {
    const GranularityMask& mask = cached_mask(x_query.dim(1), x_kv.dim(1), d);
    trace.branches.push_back(branch_attention(l.a, mask, l.v));
  }
  trace.gamma = gate_weights(x_kv, w.gate_w, w.gate_b, cfg.layernorm_eps);
  trace.output = ops::mix(trace.gamma, trace.branches);
  return trace;
}

}  // namespace

MoGTrace mog_forward_traced(const Var& x, const MoGConfig& cfg, const MoGWeights& w) {
  return mixture(x, x, cfg, w);
}

Var mog_forward(const Var& x, const MoGConfig& cfg, const MoGWeights& w) {
  return mixture(x, x, cfg, w).output;
}

MoGTrace mog_cross_traced(const Var& queries, const Var& memory, const MoGConfig& cfg,
                          const MoGWeights& w) {
  return mixture(queries, memory, cfg, w);
}

Var mog_cross(const Var& queries, const Var& memory, const MoGConfig& cfg, const MoGWeights& w) {
  return mixture(queries, memory, cfg, w).output;
}

}  // namespace scs::mog
