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

#include <functional>
#include <unordered_map>

#include "scs/numerics/parameter_set.hpp"

namespace scs::model {

struct AdamConfig {
  double lr = 1e-4;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

class Adam {
 public:
  // Returns the learning rate for a parameter; 0 freezes it for this step.
  using LrFn = std::function<double(const Parameter&, double base_lr)>;

  Adam(ParameterSet& params, AdamConfig config);

  void step(const LrFn& lr_of = {});
  std::size_t steps() const noexcept { return t_; }
  const AdamConfig& config() const noexcept { return config_; }

 private:
  struct Moments {
    Tensor m;
    Tensor v;
    std::size_t t = 0;
  };
  ParameterSet& params_;
  AdamConfig config_;
  std::unordered_map<const Parameter*, Moments> state_;
  std::size_t t_ = 0;
};

// Rescales all gradients so their joint L2 norm is at most max_norm. Returns
// the norm before clipping.
double clip_grad_norm(ParameterSet& params, double max_norm);

}  // namespace scs::model
