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

namespace scs::matching {

// Normalised (cx, cy, w, h) box; all fields in [0, 1].
struct BBox {
  double cx = 0.0;
  double cy = 0.0;
  double w = 0.0;
  double h = 0.0;

  double x1() const noexcept { return cx - 0.5 * w; }
  double y1() const noexcept { return cy - 0.5 * h; }
  double x2() const noexcept { return cx + 0.5 * w; }
  double y2() const noexcept { return cy + 0.5 * h; }
  double area() const noexcept { return w * h; }

  bool valid() const noexcept;

  friend bool operator==(const BBox&, const BBox&) = default;
};

// Intersection over union in corner form. Two zero-area boxes give 0.
double iou(const BBox& a, const BBox& b);

// IoU - (enclosing - union) / enclosing, in [-1, 1].
double giou(const BBox& a, const BBox& b);

// Partial derivatives of giou(pred, target) with respect to the prediction's
// (cx, cy, w, h). Where min/max are tied the left operand wins.
struct GiouGrad {
  double value = 0.0;
  double d_cx = 0.0, d_cy = 0.0, d_w = 0.0, d_h = 0.0;
};
GiouGrad giou_with_grad(const BBox& pred, const BBox& target);

}  // namespace scs::matching
