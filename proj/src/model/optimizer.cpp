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
#include "scs/model/optimizer.hpp"

#include <cmath>

namespace scs::model {

Adam::Adam(ParameterSet& params, AdamConfig config) : params_(params), config_(config) {
  for (Parameter& p : params_) state_.emplace(&p, Moments{Tensor(p.shape()), Tensor(p.shape()), 0});
}

void Adam::step(const LrFn& lr_of) {
  ++t_;
  for (Parameter& p : params_) {
    const double lr = lr_of ? lr_of(p, config_.lr) : config_.lr;
    if (lr == 0.0) continue;
    Moments& s = state_.at(&p);
    ++s.t;
    const double c1 = 1.0 - std::pow(config_.beta1, static_cast<double>(s.t));
    const double c2 = 1.0 - std::pow(config_.beta2, static_cast<double>(s.t));
    const auto& g = p.grad().data();
    auto w = p.value().data();
    auto m = s.m.data();
    auto v = s.v.data();
    for (std::size_t i = 0; i < w.size(); ++i) {
      m[i] = config_.beta1 * m[i] + (1.0 - config_.beta1) * g[i];
      v[i] = config_.beta2 * v[i] + (1.0 - config_.beta2) * g[i] * g[i];
      w[i] -= lr * (m[i] / c1) / (std::sqrt(v[i] / c2) + config_.eps);
    }
  }
}

double clip_grad_norm(ParameterSet& params, double max_norm) {
  double ss = 0.0;
  for (const Parameter& p : params)
    for (double g : p.grad().data()) ss += g * g;
  const double norm = std::sqrt(ss);
  if (max_norm > 0.0 && norm > max_norm) {
    const double s = max_norm / norm;
    for (Parameter& p : params)
      for (double& g : p.grad().data()) g *= s;
  }
  return norm;
}

}  // namespace scs::model
