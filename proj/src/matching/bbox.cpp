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
#include "scs/matching/bbox.hpp"

#include <algorithm>

namespace scs::matching {

bool BBox::valid() const noexcept {
  auto unit = [](double v) { return v >= 0.0 && v <= 1.0; };
  return unit(cx) && unit(cy) && unit(w) && unit(h);
}

namespace {

double overlap(double a1, double a2, double b1, double b2) {
  return std::max(0.0, std::min(a2, b2) - std::max(a1, b1));
}

}  // namespace

double iou(const BBox& a, const BBox& b) {
  const double inter = overlap(a.x1(), a.x2(), b.x1(), b.x2()) * overlap(a.y1(), a.y2(), b.y1(), b.y2());
  const double uni = a.area() + b.area() - inter;
  if (uni <= 0.0) return 0.0;
  return std::clamp(inter / uni, 0.0, 1.0);
}

double giou(const BBox& a, const BBox& b) {
  const double inter = overlap(a.x1(), a.x2(), b.x1(), b.x2()) * overlap(a.y1(), a.y2(), b.y1(), b.y2());
  const double uni = a.area() + b.area() - inter;
  const double ew = std::max(a.x2(), b.x2()) - std::min(a.x1(), b.x1());
  const double eh = std::max(a.y2(), b.y2()) - std::min(a.y1(), b.y1());
  const double enclosing = ew * eh;
  const double i = uni > 0.0 ? inter / uni : 0.0;
  if (enclosing <= 0.0) return i;
  return i - (enclosing - uni) / enclosing;
}

GiouGrad giou_with_grad(const BBox& p, const BBox& t) {
  const double px1 = p.x1(), px2 = p.x2(), py1 = p.y1(), py2 = p.y2();
  const double tx1 = t.x1(), tx2 = t.x2(), ty1 = t.y1(), ty2 = t.y2();

  // Intersection extents and their derivatives w.r.t. the prediction corners.
  const double ix1 = std::max(px1, tx1), ix2 = std::min(px2, tx2);
  const double iy1 = std::max(py1, ty1), iy2 = std::min(py2, ty2);
  const bool x_overlap = ix2 > ix1, y_overlap = iy2 > iy1;
  const double iw = x_overlap ? ix2 - ix1 : 0.0;
  const double ih = y_overlap ? iy2 - iy1 : 0.0;
  const double diw_dx1 = x_overlap && px1 >= tx1 ? -1.0 : 0.0;
  const double diw_dx2 = x_overlap && px2 <= tx2 ? 1.0 : 0.0;
  const double dih_dy1 = y_overlap && py1 >= ty1 ? -1.0 : 0.0;
  const double dih_dy2 = y_overlap && py2 <= ty2 ? 1.0 : 0.0;

  const double inter = iw * ih;
  const double pw = px2 - px1, ph = py2 - py1;
  const double uni = pw * ph + t.area() - inter;

  const double ex1 = std::min(px1, tx1), ex2 = std::max(px2, tx2);
  const double ey1 = std::min(py1, ty1), ey2 = std::max(py2, ty2);
  const double ew = ex2 - ex1, eh = ey2 - ey1;
  const double enc = ew * eh;
  const double dew_dx1 = px1 <= tx1 ? -1.0 : 0.0;
  const double dew_dx2 = px2 >= tx2 ? 1.0 : 0.0;
  const double deh_dy1 = py1 <= ty1 ? -1.0 : 0.0;
  const double deh_dy2 = py2 >= ty2 ? 1.0 : 0.0;

  GiouGrad out;
  if (uni <= 0.0 || enc <= 0.0) {
    out.value = giou(p, t);
    return out;
  }
  out.value = inter / uni - 1.0 + uni / enc;

  // d giou = dI / U - I dU / U^2 + dU / E - U dE / E^2, with dU = dA_p - dI.
  const double dI[4] = {ih * diw_dx1, ih * diw_dx2, iw * dih_dy1, iw * dih_dy2};
  const double dAp[4] = {-ph, ph, -pw, pw};
  const double dE[4] = {eh * dew_dx1, eh * dew_dx2, ew * deh_dy1, ew * deh_dy2};
  double dg[4];
  for (int c = 0; c < 4; ++c) {
    const double dU = dAp[c] - dI[c];
    dg[c] = dI[c] / uni - inter * dU / (uni * uni) + dU / enc - uni * dE[c] / (enc * enc);
  }
  // corners (x1, x2, y1, y2) -> (cx, cy, w, h)
  out.d_cx = dg[0] + dg[1];
  out.d_w = 0.5 * (dg[1] - dg[0]);
  out.d_cy = dg[2] + dg[3];
  out.d_h = 0.5 * (dg[3] - dg[2]);
  return out;
}

}  // namespace scs::matching
