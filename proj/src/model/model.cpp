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
#include "scs/model/model.hpp"

#include <cmath>

#include "scs/errors.hpp"

namespace scs::model {

Tensor positional_encoding(std::size_t n, std::size_t d) {
  Tensor pe({n, d});
  for (std::size_t pos = 0; pos < n; ++pos) {
    for (std::size_t i = 0; i < d; ++i) {
      const double freq = std::pow(10000.0, -static_cast<double>(2 * (i / 2)) / static_cast<double>(d));
      const double angle = static_cast<double>(pos) * freq;
      pe.at(pos, i) = (i % 2 == 0) ? std::sin(angle) : std::cos(angle);
    }
  }
  return pe;
}

Tensor patchify(const std::vector<const data::Image*>& images, std::size_t patch) {
  if (images.empty()) throw DimensionError("patchify: empty batch");
  const std::size_t w = images[0]->width, h = images[0]->height;
  if (patch == 0 || w % patch != 0 || h % patch != 0) {
    throw DimensionError("patchify: " + std::to_string(w) + "x" + std::to_string(h) +
                         " image is not divisible into " + std::to_string(patch) + "-pixel patches");
  }
  const std::size_t px = w / patch, py = h / patch, feat = patch * patch * 3;
  Tensor out({images.size(), px * py, feat});
  for (std::size_t b = 0; b < images.size(); ++b) {
    const data::Image& img = *images[b];
    if (img.width != w || img.height != h) throw DimensionError("patchify: images in a batch differ in size");
    for (std::size_t ty = 0; ty < py; ++ty) {
      for (std::size_t tx = 0; tx < px; ++tx) {
        double* dst = out.data().data() + (b * px * py + ty * px + tx) * feat;
        for (std::size_t y = 0; y < patch; ++y)
          for (std::size_t x = 0; x < patch; ++x)
            for (std::size_t c = 0; c < 3; ++c) *dst++ = img.at(tx * patch + x, ty * patch + y, c);
      }
    }
  }
  return out;
}

ScsModel::ScsModel(ModelConfig config, std::uint64_t seed) : config_(std::move(config)) {
  config_.validate();
  RngState rng(seed);
  const std::size_t d = config_.dim();

  patch_w_ = &params_.add("proj.patch_w", xavier_uniform(config_.patch_features(), d, rng));
  patch_b_ = &params_.add("proj.patch_b", Tensor::zeros({d}));
  word_emb_ = &params_.add("proj.word_emb", uniform_tensor({config_.effective_vocab(), d}, -1.0, 1.0, rng));
  type_emb_ = &params_.add("proj.type_emb", uniform_tensor({2, d}, -1.0, 1.0, rng));

  for (std::size_t i = 0; i < config_.sce_blocks; ++i) {
    const std::string p = "sce." + std::to_string(i);
    SceBlock blk;
    blk.attn = mog::MoGParams::create(params_, p + ".attn", config_.mog, rng);
    blk.w_o = &params_.add(p + ".w_o", xavier_uniform(d, d, rng));
    blk.ffn = make_ffn(p + ".ffn", rng);
    sce_.push_back(blk);
  }
  fuse_logits_ = &params_.add("fuse.logits", Tensor::zeros({config_.sce_blocks}));
  queries_ = &params_.add("queries", uniform_tensor({config_.num_queries, d}, -1.0, 1.0, rng));
  for (std::size_t i = 0; i < config_.scd_blocks; ++i)
    scd_.push_back(make_decoder_block("scd." + std::to_string(i), true, rng));
  for (std::size_t i = 0; i < config_.ssd_blocks; ++i)
    ssd_.push_back(make_decoder_block("ssd." + std::to_string(i), false, rng));

  head_w1_ = &params_.add("head.w1", xavier_uniform(d, d, rng));
  head_b1_ = &params_.add("head.b1", Tensor::zeros({d}));
  head_w2_ = &params_.add("head.w2", xavier_uniform(d, 5, rng));
  head_b2_ = &params_.add("head.b2", Tensor::zeros({5}));
}

ScsModel::Ffn ScsModel::make_ffn(const std::string& prefix, RngState& rng) {
  const std::size_t d = config_.dim(), hidden = config_.ffn_mult * d;
  Ffn f;
  f.w1 = &params_.add(prefix + ".w1", xavier_uniform(d, hidden, rng));
  f.b1 = &params_.add(prefix + ".b1", Tensor::zeros({hidden}));
  f.w2 = &params_.add(prefix + ".w2", xavier_uniform(hidden, d, rng));
  f.b2 = &params_.add(prefix + ".b2", Tensor::zeros({d}));
  return f;
}

ScsModel::DecoderBlock ScsModel::make_decoder_block(const std::string& prefix, bool mog_cross, RngState& rng) {
  const std::size_t d = config_.dim();
  DecoderBlock blk;
  blk.self_proj = mog::ProjectionParams::create(params_, prefix + ".self", d, rng);
  blk.self_o = &params_.add(prefix + ".self_o", xavier_uniform(d, d, rng));
  if (mog_cross) {
    blk.cross = mog::MoGParams::create(params_, prefix + ".cross", config_.mog, rng);
  } else {
    blk.cross.proj = mog::ProjectionParams::create(params_, prefix + ".cross", d, rng);
  }
  blk.cross_o = &params_.add(prefix + ".cross_o", xavier_uniform(d, d, rng));
  blk.ffn = make_ffn(prefix + ".ffn", rng);
  return blk;
}

Var ScsModel::ffn_forward(const Ffn& f, const Var& x) const {
  Var h = ops::gelu(ops::linear(x, leaf(*f.w1), leaf(*f.b1)));
  return ops::linear(h, leaf(*f.w2), leaf(*f.b2));
}

TokenSequence ScsModel::project_tokens(const std::vector<const data::Image*>& images,
                                       const std::vector<std::vector<int>>& ids) {
  if (images.size() != ids.size()) throw DimensionError("project_tokens: image and expression batch sizes differ");
  for (const data::Image* img : images) {
    if (img->width != config_.image_size || img->height != config_.image_size) {
      throw DimensionError("project_tokens: expected " + std::to_string(config_.image_size) + "x" +
                           std::to_string(config_.image_size) + " image, got " + std::to_string(img->width) +
                           "x" + std::to_string(img->height));
    }
  }
  const std::size_t b = images.size();
  TokenSequence t;
  t.visual = ops::linear(constant(patchify(images, config_.patch_size)), leaf(*patch_w_), leaf(*patch_b_));
  t.n_visual = t.visual.dim(1);
  t.n_text = b ? ids[0].size() : 0;
  Var seq = t.visual;
  if (t.n_text > 0) {
    t.text = ops::embedding(leaf(*word_emb_), ids);
    seq = ops::concat_tokens(t.visual, t.text);
  } else {
    for (const auto& row : ids)
      if (!row.empty()) throw DimensionError("embedding: id sequences in a batch must have equal length");
  }
  std::vector<std::vector<int>> types(b, std::vector<int>(t.n_visual + t.n_text, 0));
  for (auto& row : types) std::fill(row.begin() + static_cast<std::ptrdiff_t>(t.n_visual), row.end(), 1);
  seq = ops::add(seq, ops::embedding(leaf(*type_emb_), types));
  t.combined = ops::add_broadcast(seq, constant(positional_encoding(t.n_visual + t.n_text, config_.dim())));
  return t;
}

SceOutput ScsModel::sce_forward(const Var& tokens) {
  SceOutput out;
  Var x = tokens;
  const double eps = config_.mog.layernorm_eps;
  for (const SceBlock& blk : sce_) {
    Var attn = mog::mog_forward(ops::layernorm(x, eps), config_.mog, mog::MoGWeights::bind(blk.attn));
    x = ops::add(x, ops::linear(attn, leaf(*blk.w_o)));
    x = ops::add(x, ffn_forward(blk.ffn, ops::layernorm(x, eps)));
    out.per_block.push_back(x);
  }
  out.memory = x;
  return out;
}

Var ScsModel::fuse_hierarchy(const std::vector<Var>& per_block) {
  if (per_block.empty()) throw DimensionError("fuse_hierarchy: no encoder blocks to fuse");
  if (per_block.size() != fuse_logits_->value().size()) {
    throw DimensionError("fuse_hierarchy: " + std::to_string(per_block.size()) + " blocks for " +
                         std::to_string(fuse_logits_->value().size()) + " fusion weights");
  }
  Var w = ops::softmax(leaf(*fuse_logits_));
  return ops::layernorm(ops::weighted_sum(w, per_block), config_.mog.layernorm_eps);
}

Var ScsModel::initial_queries(std::size_t batch) {
  return ops::add_broadcast(constant(Tensor::zeros({batch, config_.num_queries, config_.dim()})), leaf(*queries_));
}

Var ScsModel::scd_forward(const Var& queries, const Var& memory) {
  const double eps = config_.mog.layernorm_eps;
  const std::size_t h = config_.heads();
  Var mem = ops::layernorm(memory, eps);
  Var q = queries;
  for (const DecoderBlock& blk : scd_) {
    Var n = ops::layernorm(q, eps);
    q = ops::add(q, ops::linear(mog::standard_attention(n, n, mog::ProjectionWeights::bind(blk.self_proj), h),
                                leaf(*blk.self_o)));
    Var cross = mog::mog_cross(ops::layernorm(q, eps), mem, config_.mog, mog::MoGWeights::bind(blk.cross));
    q = ops::add(q, ops::linear(cross, leaf(*blk.cross_o)));
    q = ops::add(q, ffn_forward(blk.ffn, ops::layernorm(q, eps)));
  }
  return q;
}

Var ScsModel::ssd_forward(const Var& coarse, const Var& fused_memory) {
  const double eps = config_.mog.layernorm_eps;
  const std::size_t h = config_.heads();
  Var q = coarse;
  for (const DecoderBlock& blk : ssd_) {
    Var n = ops::layernorm(q, eps);
    q = ops::add(q, ops::linear(mog::standard_attention(n, n, mog::ProjectionWeights::bind(blk.self_proj), h),
                                leaf(*blk.self_o)));
    Var cross = mog::standard_attention(ops::layernorm(q, eps), fused_memory,
                                        mog::ProjectionWeights::bind(blk.cross.proj), h);
    q = ops::add(q, ops::linear(cross, leaf(*blk.cross_o)));
    q = ops::add(q, ffn_forward(blk.ffn, ops::layernorm(q, eps)));
  }
  return q;
}

Prediction ScsModel::regression_head(const Var& states) {
  Var n = ops::layernorm(states, config_.mog.layernorm_eps);
  Var hidden = ops::gelu(ops::linear(n, leaf(*head_w1_), leaf(*head_b1_)));
  Var out = ops::sigmoid(ops::linear(hidden, leaf(*head_w2_), leaf(*head_b2_)));
  const std::size_t b = states.dim(0), q = states.dim(1);
  return {ops::slice_last(out, 0, 4), ops::reshape(ops::slice_last(out, 4, 1), {b, q})};
}

Prediction ScsModel::forward(const std::vector<const data::Image*>& images, const std::vector<std::vector<int>>& ids) {
  TokenSequence tokens = project_tokens(images, ids);
  SceOutput enc = sce_forward(tokens.combined);
  Var coarse = scd_forward(initial_queries(images.size()), enc.memory);
  Var fused = fuse_hierarchy(enc.per_block);
  return regression_head(ssd_forward(coarse, fused));
}

Prediction ScsModel::forward(const data::Image& image, const std::vector<int>& ids) {
  return forward(std::vector<const data::Image*>{&image}, std::vector<std::vector<int>>{ids});
}

void ScsModel::zero_output_projections() {
  auto zero = [](Parameter* p) { p->value().fill(0.0); };
  for (SceBlock& blk : sce_) {
    zero(blk.w_o);
    zero(blk.ffn.w2);
    zero(blk.ffn.b2);
  }
  for (auto* stack : {&scd_, &ssd_}) {
    for (DecoderBlock& blk : *stack) {
      zero(blk.self_o);
      zero(blk.cross_o);
      zero(blk.ffn.w2);
      zero(blk.ffn.b2);
    }
  }
}

bool ScsModel::is_projector_parameter(const std::string& name) { return name.rfind("proj.", 0) == 0; }

}  // namespace scs::model
