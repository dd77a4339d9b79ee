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

#include "scs/numerics/autograd.hpp"

namespace scs {

inline constexpr double kDefaultFdStep = 1e-5;

// Central differences (f(x + h e_i) - f(x - h e_i)) / 2h for every coordinate.
Tensor finite_difference_grad(const std::function<double(const Tensor&)>& f, const Tensor& at,
                              double h = kDefaultFdStep);

// Same, perturbing p.value() in place; p is restored before returning.
Tensor finite_difference_grad(const std::function<double()>& f, Parameter& p,
                              double h = kDefaultFdStep);

// max_i |a_i - n_i| / max(|a_i|, |n_i|, floor). The floor keeps coordinates
// whose true derivative is ~0 from reporting pure rounding noise.
double max_relative_error(const Tensor& analytic, const Tensor& numeric, double floor = 1e-6);

}  // namespace scs
