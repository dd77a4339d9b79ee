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
#include "scs/matching/loss.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "scs/errors.hpp"

namespace scs::matching {
namespace {

constexpr double kProbClamp = 1e-12;

void check_shapes(const Var& boxes, const Var& confidence, std::size_t batch_targets) {
  if (boxes.rank() != 3 || boxes.dim(2) != 4 || confidence.rank() != 2 ||
      confidence.dim(0) != boxes.dim(0) || confidence.dim(1) != boxes.dim(1)) {
    throw DimensionError("match_and_loss: boxes " + shape_to_string(boxes.shape()) + " and confidence " +
                         shape_to_string(confidence.shape()) + " disagree");
  }
  if (batch_targets != boxes.dim(0)) {
    throw DimensionError("match_and_loss: " + std::to_string(batch_targets) + " target lists for batch of " +
                         std::to_string(boxes.dim(0)));
  }
}

BBox box_at(const Tensor& t, std::size_t b, std::size_t q, std::size_t queries) {
  const double* p = t.data().data() + (b * queries + q) * 4;
  return {p[0], p[1], p[2], p[3]};
}

}  // namespace

std::vector<std::vector<BBox>> boxes_from_tensor(const Tensor& boxes) {
  std::vector<std::vector<BBox>> out(boxes.dim(0));
  for (std::size_t b = 0; b < boxes.dim(0); ++b)
    for (std::size_t q = 0; q < boxes.dim(1); ++q) out[b].push_back(box_at(boxes, b, q, boxes.dim(1)));
  return out;
}

CostMatrix matching_cost(const std::vector<BBox>& predicted, const std::vector<double>& confidence,
                         const std::vector<BBox>& targets, const LossWeights& w) {
  CostMatrix cost(predicted.size(), targets.size());
  for (std::size_t q = 0; q < predicted.size(); ++q) {
    const BBox& p = predicted[q];
    for (std::size_t t = 0; t < targets.size(); ++t) {
      const BBox& g = targets[t];
      const double l1 = std::abs(p.cx - g.cx) + std::abs(p.cy - g.cy) + std::abs(p.w - g.w) + std::abs(p.h - g.h);
      cost(q, t) = w.l1 * l1 + w.giou * (1.0 - giou(p, g)) - w.conf * confidence[q];
    }
  }
  return cost;
}

Var set_loss(const Var& boxes, const Var& confidence, const std::vector<std::vector<BBox>>& targets,
             const std::vector<Assignment>& assignments, const LossWeights& w) {
  check_shapes(boxes, confidence, targets.size());
  const std::size_t batch = boxes.dim(0), queries = boxes.dim(1);
  const Tensor& bv = boxes.value();
  const Tensor& cv = confidence.value();
  Tensor d_boxes(bv.shape());
  Tensor d_conf(cv.shape());
  double total = 0.0;
  const double inv_batch = 1.0 / static_cast<double>(batch);

  for (std::size_t b = 0; b < batch; ++b) {
    if (targets[b].empty()) throw ValidationError("sample " + std::to_string(b) + " has no target box");
    const double inv_t = 1.0 / static_cast<double>(targets[b].size());
    std::vector<char> matched(queries, 0);
    for (const auto& [q, t] : assignments[b].pairs) {
      matched[q] = 1;
      const BBox p = box_at(bv, b, q, queries);
      const BBox& g = targets[b][t];
      const double pv[4] = {p.cx, p.cy, p.w, p.h};
      const double gv[4] = {g.cx, g.cy, g.w, g.h};
      const GiouGrad gg = giou_with_grad(p, g);
      double l1 = 0.0;
      double* db = d_boxes.data().data() + (b * queries + q) * 4;
      for (int c = 0; c < 4; ++c) {
        const double diff = pv[c] - gv[c];
        l1 += std::abs(diff);
        const double sign = diff > 0.0 ? 1.0 : (diff < 0.0 ? -1.0 : 0.0);
        db[c] += inv_batch * inv_t * w.l1 * sign;
      }
      db[0] -= inv_batch * inv_t * w.giou * gg.d_cx;
      db[1] -= inv_batch * inv_t * w.giou * gg.d_cy;
      db[2] -= inv_batch * inv_t * w.giou * gg.d_w;
      db[3] -= inv_batch * inv_t * w.giou * gg.d_h;
      total += inv_batch * inv_t * (w.l1 * l1 + w.giou * (1.0 - gg.value));
    }
    const double inv_q = 1.0 / static_cast<double>(queries);
    for (std::size_t q = 0; q < queries; ++q) {
      const double raw = cv[b * queries + q];
      const double c = std::clamp(raw, kProbClamp, 1.0 - kProbClamp);
      const bool clamped = c != raw;
      const double scale = inv_batch * inv_q * w.conf;
      if (matched[q]) {
        total -= scale * std::log(c);
        if (!clamped) d_conf[b * queries + q] -= scale / c;
      } else {
        total -= scale * std::log1p(-c);
        if (!clamped) d_conf[b * queries + q] += scale / (1.0 - c);
      }
    }
  }

  return make_op(Tensor::scalar(total), {boxes, confidence},
                 [d_boxes = std::move(d_boxes), d_conf = std::move(d_conf)](const Tensor& g, std::vector<Tensor*>& in) {
                   if (in[0]) {
                     for (std::size_t i = 0; i < d_boxes.size(); ++i) (*in[0])[i] += g[0] * d_boxes[i];
                   }
                   if (in[1]) {
                     for (std::size_t i = 0; i < d_conf.size(); ++i) (*in[1])[i] += g[0] * d_conf[i];
                   }
                 });
}

MatchResult match_and_loss(const Var& boxes, const Var& confidence,
                           const std::vector<std::vector<BBox>>& targets, const LossWeights& w) {
  check_shapes(boxes, confidence, targets.size());
  const std::size_t batch = boxes.dim(0), queries = boxes.dim(1);
  const auto predicted = boxes_from_tensor(boxes.value());
  MatchResult out;
  out.assignments.reserve(batch);
  for (std::size_t b = 0; b < batch; ++b) {
    if (targets[b].empty()) {
      throw ValidationError("sample " + std::to_string(b) + " has no target box; every expression needs one");
    }
    std::vector<double> conf(confidence.value().data().begin() + static_cast<std::ptrdiff_t>(b * queries),
                             confidence.value().data().begin() + static_cast<std::ptrdiff_t>((b + 1) * queries));
    out.assignments.push_back(hungarian(matching_cost(predicted[b], conf, targets[b], w)));
  }
  out.loss = set_loss(boxes, confidence, targets, out.assignments, w);
  return out;
}

}  // namespace scs::matching
