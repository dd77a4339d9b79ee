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

#include <vector>

#include "scs/matching/bbox.hpp"
#include "scs/matching/hungarian.hpp"
#include "scs/numerics/autograd.hpp"

namespace scs::matching {

// DETR-convention weights: lambda_L1 = 5, lambda_giou = 2, lambda_conf = 1.
struct LossWeights {
  double l1 = 5.0;
  double giou = 2.0;
  double conf = 1.0;
};

// Per-sample matching cost: l1 * |p - t|_1 + giou * (1 - GIoU) - conf * c.
CostMatrix matching_cost(const std::vector<BBox>& predicted, const std::vector<double>& confidence,
                         const std::vector<BBox>& targets, const LossWeights& weights);

struct MatchResult {
  Var loss;                              // scalar, mean over the batch
  std::vector<Assignment> assignments;   // one per sample
};

// boxes: [B x Q x 4] (cx, cy, w, h); confidence: [B x Q]; targets[b] non-empty.
// Per sample: (1/T) sum over matched pairs of l1 * L1 + giou * (1 - GIoU),
// plus conf * mean_q BCE(c_q, matched_q). Assignments are computed once and
// held fixed for the backward pass.
MatchResult match_and_loss(const Var& boxes, const Var& confidence,
                           const std::vector<std::vector<BBox>>& targets,
                           const LossWeights& weights = {});

// Same loss with caller-supplied assignments (used by gradient checks so
// perturbations cannot flip the matching).
Var set_loss(const Var& boxes, const Var& confidence, const std::vector<std::vector<BBox>>& targets,
             const std::vector<Assignment>& assignments, const LossWeights& weights = {});

// Reads [B x Q x 4] into per-sample box lists.
std::vector<std::vector<BBox>> boxes_from_tensor(const Tensor& boxes);

}  // namespace scs::matching
