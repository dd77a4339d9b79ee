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

// Differentiable tensor operations. Shapes follow the batch-first layout used
// throughout: tokens are [B x N x D], attention heads [B x H x N x d_k].

#include <vector>

#include "scs/numerics/autograd.hpp"

namespace scs::ops {

inline constexpr double kDefaultLayerNormEps = 1e-5;

// [M x K] * [K x P]; batched [... x M x K] * [... x K x P] over equal leading
// axes; or [B x M x K] * [K x P].
Var matmul(const Var& a, const Var& b);
// Batched a * b^T over all leading axes: [... x N x K] * [... x M x K] -> [... x N x M].
Var matmul_nt(const Var& a, const Var& b);
// Applies w [K x P] (and optional bias [P]) to the last axis of x.
Var linear(const Var& x, const Var& w);
Var linear(const Var& x, const Var& w, const Var& bias);

Var add(const Var& a, const Var& b);
Var sub(const Var& a, const Var& b);
Var mul(const Var& a, const Var& b);
Var scale(const Var& a, double s);
// Adds y to x where y's shape equals the trailing axes of x.
Var add_broadcast(const Var& x, const Var& y);

Var gelu(const Var& x);
Var sigmoid(const Var& x);

// Softmax over the last axis restricted to positions where mask == 1, i.e.
// softmax(x + log(mask)). Masked outputs are exactly 0.0. The mask's shape
// must equal the trailing axes of x (commonly [N x M] against [B x H x N x M]).
Var masked_softmax(const Var& x, const Tensor& mask);
Var softmax(const Var& x);

// Per-row standardisation over the last axis (no affine part).
Var layernorm(const Var& x, double eps = kDefaultLayerNormEps);
// x * gamma + beta over the last axis.
Var affine(const Var& x, const Var& gamma, const Var& beta);

// Mean over axis 1 of [B x N x D] -> [B x D].
Var mean_pool(const Var& x);

Var split_heads(const Var& x, std::size_t heads);
Var merge_heads(const Var& x);

// sum_g gamma[b, g] * ys[g][b, ...]
Var mix(const Var& gamma, const std::vector<Var>& ys);
// sum_l w[l] * ys[l]
Var weighted_sum(const Var& w, const std::vector<Var>& ys);

// Concatenates [B x N1 x D] and [B x N2 x D] along the token axis.
Var concat_tokens(const Var& a, const Var& b);
// Row lookup: table [V x D], ids per batch element (equal lengths) -> [B x L x D].
Var embedding(const Var& table, const std::vector<std::vector<int>>& ids);
// Copies [.. x F] columns [start, start + len) of the last axis.
Var slice_last(const Var& x, std::size_t start, std::size_t len);
Var reshape(const Var& x, Shape shape);
Var sum(const Var& x);

}  // namespace scs::ops
