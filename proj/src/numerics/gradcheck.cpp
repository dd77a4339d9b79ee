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
#include "scs/numerics/gradcheck.hpp"

#include <algorithm>
#include <cmath>

#include "scs/errors.hpp"

namespace scs {

Tensor finite_difference_grad(const std::function<double(const Tensor&)>& f, const Tensor& at,
                              double h) {
  Tensor x = at;
  Tensor grad(at.shape());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double orig = x[i];
    x[i] = orig + h;
    const double plus = f(x);
    x[i] = orig - h;
    const double minus = f(x);
    x[i] = orig;
    grad[i] = (plus - minus) / (2.0 * h);
  }
  return grad;
}

Tensor finite_difference_grad(const std::function<double()>& f, Parameter& p, double h) {
  Tensor grad(p.shape());
  Tensor& x = p.value();
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double orig = x[i];
    x[i] = orig + h;
    const double plus = f();
    x[i] = orig - h;
    const double minus = f();
    x[i] = orig;
    grad[i] = (plus - minus) / (2.0 * h);
  }
  return grad;
}

double max_relative_error(const Tensor& analytic, const Tensor& numeric, double floor) {
  if (analytic.shape() != numeric.shape()) {
    throw DimensionError("max_relative_error: " + shape_to_string(analytic.shape()) + " vs " +
                         shape_to_string(numeric.shape()));
  }
  double worst = 0.0;
  for (std::size_t i = 0; i < analytic.size(); ++i) {
    const double a = analytic[i], n = numeric[i];
    const double denom = std::max({std::abs(a), std::abs(n), floor});
    worst = std::max(worst, std::abs(a - n) / denom);
  }
  return worst;
}

}  // namespace scs
