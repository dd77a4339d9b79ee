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
#include <cmath>

#include <gtest/gtest.h>

#include "oracles/reference.hpp"
#include "scs/errors.hpp"
#include "scs/matching/loss.hpp"
#include "scs/numerics/gradcheck.hpp"
#include "scs/numerics/ops.hpp"
#include "unit/test_util.hpp"

namespace scs::matching {
namespace {

BBox from_corners(double x1, double y1, double x2, double y2) {
  return {0.5 * (x1 + x2), 0.5 * (y1 + y2), x2 - x1, y2 - y1};
}

// Corners on the 1/512 lattice so the raster oracle counts areas exactly.
BBox random_lattice_box(RngState& rng) {
  const auto a = static_cast<double>(rng.below(380)), b = static_cast<double>(rng.below(380));
  const auto w = static_cast<double>(20 + rng.below(112)), h = static_cast<double>(20 + rng.below(112));
  return from_corners(a / 512, b / 512, (a + w) / 512, (b + h) / 512);
}

TEST(Geometry, HandCases) {
  EXPECT_NEAR(iou({0.25, 0.5, 0.5, 1.0}, {0.5, 0.5, 0.5, 1.0}), 1.0 / 3.0, 1e-9);
  EXPECT_NEAR(giou({0.1, 0.1, 0.2, 0.2}, {0.9, 0.9, 0.2, 0.2}), -0.92, 1e-9);
  const BBox b{0.4, 0.6, 0.3, 0.2};
  EXPECT_EQ(iou(b, b), 1.0);
  EXPECT_EQ(giou(b, b), 1.0);
  EXPECT_EQ(iou({0.1, 0.1, 0.1, 0.1}, {0.8, 0.8, 0.1, 0.1}), 0.0);
  EXPECT_EQ(iou({0.5, 0.5, 0.0, 0.0}, {0.5, 0.5, 0.0, 0.0}), 0.0);
  const BBox outer{0.5, 0.5, 0.6, 0.6}, inner{0.5, 0.5, 0.2, 0.3};
  EXPECT_NEAR(giou(outer, inner), iou(outer, inner), 1e-15);
}

TEST(Geometry, AgreesWithRasterOracle) {
  RngState rng(17);
  for (int trial = 0; trial < 120; ++trial) {
    const BBox a = random_lattice_box(rng), b = random_lattice_box(rng);
    EXPECT_NEAR(iou(a, b), oracle::raster_iou(a, b), 1e-3);
    EXPECT_NEAR(giou(a, b), oracle::raster_giou(a, b), 1e-3);
  }
}

TEST(Geometry, SymmetryAndRanges) {
  RngState rng(18);
  for (int trial = 0; trial < 500; ++trial) {
    const BBox a{rng.uniform(), rng.uniform(), rng.uniform(0, 0.5), rng.uniform(0, 0.5)};
    const BBox b{rng.uniform(), rng.uniform(), rng.uniform(0, 0.5), rng.uniform(0, 0.5)};
    EXPECT_EQ(iou(a, b), iou(b, a));
    EXPECT_GE(iou(a, b), 0.0);
    EXPECT_LE(iou(a, b), 1.0);
    EXPECT_GE(giou(a, b), -1.0);
    EXPECT_LE(giou(a, b), iou(a, b) + 1e-15);
  }
}

TEST(Geometry, GiouGradientMatchesFiniteDifferences) {
  RngState rng(19);
  for (int trial = 0; trial < 50; ++trial) {
    const BBox p{rng.uniform(0.3, 0.7), rng.uniform(0.3, 0.7), rng.uniform(0.1, 0.4), rng.uniform(0.1, 0.4)};
    const BBox t{rng.uniform(0.3, 0.7), rng.uniform(0.3, 0.7), rng.uniform(0.1, 0.4), rng.uniform(0.1, 0.4)};
    const GiouGrad g = giou_with_grad(p, t);
    EXPECT_NEAR(g.value, giou(p, t), 1e-14);
    const Tensor num = finite_difference_grad(
        [&](const Tensor& x) { return giou({x[0], x[1], x[2], x[3]}, t); }, Tensor::vector({p.cx, p.cy, p.w, p.h}));
    const Tensor ana = Tensor::vector({g.d_cx, g.d_cy, g.d_w, g.d_h});
    EXPECT_LT(max_relative_error(ana, num), 1e-4);
  }
}

std::vector<std::vector<double>> to_rows(const CostMatrix& c) {
  std::vector<std::vector<double>> r(c.rows(), std::vector<double>(c.cols()));
  for (std::size_t i = 0; i < c.rows(); ++i)
    for (std::size_t j = 0; j < c.cols(); ++j) r[i][j] = c(i, j);
  return r;
}

void expect_valid(const Assignment& a, const CostMatrix& c) {
  std::vector<bool> rows(c.rows()), cols(c.cols());
  double s = 0.0;
  ASSERT_EQ(a.pairs.size(), std::min(c.rows(), c.cols()));
  for (auto [r, k] : a.pairs) {
    EXPECT_FALSE(rows[r]);
    EXPECT_FALSE(cols[k]);
    rows[r] = cols[k] = true;
    s += c(r, k);
  }
  EXPECT_EQ(a.cost, s);
}

TEST(Hungarian, DocumentedCases) {
  Assignment a = hungarian(CostMatrix(2, 2, {0, 9, 9, 0}));
  EXPECT_EQ(a.pairs, (std::vector<std::pair<std::size_t, std::size_t>>{{0, 0}, {1, 1}}));
  EXPECT_EQ(a.cost, 0.0);
  a = hungarian(CostMatrix(2, 2, {4, 1, 2, 3}));
  EXPECT_EQ(a.pairs, (std::vector<std::pair<std::size_t, std::size_t>>{{0, 1}, {1, 0}}));
  EXPECT_EQ(a.cost, 3.0);
  EXPECT_TRUE(hungarian(CostMatrix(0, 3)).pairs.empty());
}

TEST(Hungarian, MatchesBruteForceUpToSix) {
  RngState rng(23);
  for (std::size_t n = 1; n <= 6; ++n) {
    for (int trial = 0; trial < 100; ++trial) {
      CostMatrix c(n, n);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) c(i, j) = rng.uniform(-10, 10);
      const Assignment a = hungarian(c);
      expect_valid(a, c);
      EXPECT_NEAR(a.cost, oracle::brute_force_assignment(to_rows(c)), 1e-9 * (1 + std::abs(a.cost)));
    }
  }
}

TEST(Hungarian, RectangularMatchesBruteForce) {
  RngState rng(24);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t r = 1 + rng.below(6), k = 1 + rng.below(6);
    CostMatrix c(r, k);
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = 0; j < k; ++j) c(i, j) = rng.uniform(0, 5);
    const Assignment a = hungarian(c);
    expect_valid(a, c);
    EXPECT_NEAR(a.cost, oracle::brute_force_assignment(to_rows(c)), 1e-9);
  }
}

TEST(Hungarian, TiesPickLexicographicallySmallest) {
  const Assignment a = hungarian(CostMatrix(3, 3, 1.0));
  EXPECT_EQ(a.pairs, (std::vector<std::pair<std::size_t, std::size_t>>{{0, 0}, {1, 1}, {2, 2}}));
  const Assignment b = hungarian(CostMatrix(3, 1, 2.0));
  EXPECT_EQ(b.pairs, (std::vector<std::pair<std::size_t, std::size_t>>{{0, 0}}));
}

TEST(Hungarian, ConstantShiftKeepsAssignment) {
  RngState rng(25);
  for (int trial = 0; trial < 50; ++trial) {
    CostMatrix c(5, 5), d(5, 5);
    for (std::size_t i = 0; i < 5; ++i)
      for (std::size_t j = 0; j < 5; ++j) {
        c(i, j) = static_cast<double>(rng.below(1000));
        d(i, j) = c(i, j) + 7.0;
      }
    const Assignment a = hungarian(c), b = hungarian(d);
    EXPECT_EQ(a.pairs, b.pairs);
    EXPECT_DOUBLE_EQ(b.cost, a.cost + 35.0);
  }
}

TEST(Hungarian, RejectsNonFinite) {
  CostMatrix c(2, 2, 1.0);
  c(0, 1) = std::nan("");
  EXPECT_THROW(hungarian(c), ValidationError);
}

Var boxes_var(const std::vector<BBox>& b) {
  Tensor t({1, b.size(), 4});
  for (std::size_t i = 0; i < b.size(); ++i) {
    t[i * 4] = b[i].cx;
    t[i * 4 + 1] = b[i].cy;
    t[i * 4 + 2] = b[i].w;
    t[i * 4 + 3] = b[i].h;
  }
  return constant(t);
}

TEST(Loss, PerfectPredictionHasZeroLoss) {
  const BBox t{0.3, 0.4, 0.2, 0.1};
  Tensor conf({1, 3}, {0.0, 1.0, 0.0});
  MatchResult m = match_and_loss(boxes_var({{0.7, 0.7, 0.1, 0.1}, t, {0.2, 0.8, 0.1, 0.2}}), constant(conf), {{t}});
  EXPECT_NEAR(m.loss.item(), 0.0, 1e-9);
  ASSERT_EQ(m.assignments[0].pairs.size(), 1u);
  EXPECT_EQ(m.assignments[0].pairs[0], (std::pair<std::size_t, std::size_t>{1, 0}));
}

TEST(Loss, HandComputedValue) {
  // One query, one target: L1 = 0.1 + 0 + 0 + 0; GIoU of a 0.1 shift of a 0.2-wide box.
  const BBox p{0.4, 0.5, 0.2, 0.2}, t{0.5, 0.5, 0.2, 0.2};
  const double inter = 0.1 * 0.2, uni = 0.08 - inter, encl = 0.3 * 0.2;
  const double g = inter / uni - (encl - uni) / encl;
  const double bce = -std::log(0.8);
  Tensor conf({1, 1}, {0.8});
  MatchResult m = match_and_loss(boxes_var({p}), constant(conf), {{t}});
  EXPECT_NEAR(m.loss.item(), 5.0 * 0.1 + 2.0 * (1.0 - g) + bce, 1e-12);
}

TEST(Loss, NonNegativeAndSingleTargetMatchesOnce) {
  RngState rng(26);
  for (int trial = 0; trial < 30; ++trial) {
    Tensor b = testing::random_tensor({2, 4, 4}, rng, 0.1, 0.6);
    Tensor c = testing::random_tensor({2, 4}, rng, 0.01, 0.99);
    MatchResult m = match_and_loss(constant(b), constant(c), {{{0.5, 0.5, 0.2, 0.2}}, {{0.3, 0.3, 0.1, 0.3}}});
    EXPECT_GE(m.loss.item(), 0.0);
    EXPECT_EQ(m.assignments[0].pairs.size(), 1u);
    EXPECT_EQ(m.assignments[1].pairs.size(), 1u);
  }
}

TEST(Loss, GradientMatchesFiniteDifferences) {
  RngState rng(27);
  Parameter boxes("boxes", testing::random_tensor({2, 3, 4}, rng, 0.2, 0.5));
  Parameter conf("conf", testing::random_tensor({2, 3}, rng, 0.1, 0.9));
  const std::vector<std::vector<BBox>> targets{{{0.45, 0.5, 0.3, 0.2}}, {{0.3, 0.6, 0.25, 0.35}, {0.6, 0.4, 0.2, 0.3}}};
  MatchResult m = match_and_loss(leaf(boxes), leaf(conf), targets);
  backward(m.loss);
  auto f = [&] {
    NoGradGuard g;
    return set_loss(leaf(boxes), leaf(conf), targets, m.assignments).item();
  };
  EXPECT_LT(max_relative_error(boxes.grad(), finite_difference_grad(f, boxes)), 1e-4);
  EXPECT_LT(max_relative_error(conf.grad(), finite_difference_grad(f, conf)), 1e-4);
}

TEST(Loss, EmptyTargetsRejected) {
  Tensor b({1, 2, 4}, std::vector<double>(8, 0.5));
  Tensor c({1, 2}, {0.5, 0.5});
  EXPECT_THROW(match_and_loss(constant(b), constant(c), {{}}), ValidationError);
}

TEST(Loss, MatchingCostFormula) {
  const BBox p{0.4, 0.5, 0.2, 0.2}, t{0.5, 0.5, 0.2, 0.2};
  const CostMatrix c = matching_cost({p}, {0.7}, {t}, LossWeights{});
  EXPECT_NEAR(c(0, 0), 5.0 * 0.1 + 2.0 * (1.0 - giou(p, t)) - 0.7, 1e-12);
}

}  // namespace
}  // namespace scs::matching
