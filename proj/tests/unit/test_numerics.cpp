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
#include <cstdlib>

#include <gtest/gtest.h>

#include "scs/errors.hpp"
#include "scs/numerics/gradcheck.hpp"
#include "scs/numerics/kernels.hpp"
#include "scs/numerics/ops.hpp"
#include "scs/numerics/parameter_set.hpp"
#include "unit/test_util.hpp"

namespace scs {
namespace {

using testing::random_tensor;

TEST(Tensor, ShapeAndAccess) {
  Tensor t({2, 3});
  EXPECT_EQ(t.size(), 6u);
  EXPECT_EQ(t.rank(), 2u);
  t.at(1, 2) = 5.0;
  EXPECT_EQ(t[5], 5.0);
  EXPECT_EQ(shape_to_string(t.shape()), "[2x3]");
  EXPECT_THROW(Tensor({2, 2}, {1.0, 2.0}), DimensionError);
  EXPECT_THROW(t.item(), DimensionError);
  EXPECT_EQ(Tensor::scalar(4.0).item(), 4.0);
  EXPECT_EQ(Tensor::identity(3).at(1, 1), 1.0);
  EXPECT_EQ(t.reshaped({3, 2}).at(2, 1), 5.0);
}

// --- kernels: every SIMD table must agree with the scalar reference ---------

std::vector<const kernels::KernelTable*> simd_tables() {
  std::vector<const kernels::KernelTable*> out;
  if (auto* t = kernels::avx2_table()) out.push_back(t);
  if (auto* t = kernels::neon_table()) out.push_back(t);
  return out;
}

TEST(Kernels, ScalarTableIsAlwaysPresent) {
  EXPECT_EQ(kernels::scalar_table().isa, kernels::Isa::kScalar);
  EXPECT_TRUE(kernels::select("scalar"));
  EXPECT_EQ(kernels::active().isa, kernels::Isa::kScalar);
  EXPECT_FALSE(kernels::select("sse9"));
}

TEST(Kernels, DotAndAxpyMatchScalarAcrossLengths) {
  RngState rng(11);
  const auto& ref = kernels::scalar_table();
  for (const auto* simd : simd_tables()) {
    for (std::size_t n = 0; n <= 67; ++n) {
      Tensor x = random_tensor({n + 1}, rng), y = random_tensor({n + 1}, rng);
      const double a = ref.dot(x.data().data(), y.data().data(), n);
      const double b = simd->dot(x.data().data(), y.data().data(), n);
      EXPECT_NEAR(a, b, 1e-13 * (1.0 + std::abs(a))) << simd->name << " n=" << n;

      Tensor y1 = y, y2 = y;
      ref.axpy(0.37, x.data().data(), y1.data().data(), n);
      simd->axpy(0.37, x.data().data(), y2.data().data(), n);
      // axpy is elementwise; FMA contraction may differ in the last bit only.
      for (std::size_t i = 0; i <= n; ++i) EXPECT_NEAR(y1[i], y2[i], 1e-15) << simd->name;
    }
  }
}

Tensor naive_matmul(const Tensor& a, const Tensor& b) {
  const std::size_t m = a.dim(0), k = a.dim(1), p = b.dim(1);
  Tensor c({m, p});
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < p; ++j) {
      double s = 0.0;
      for (std::size_t t = 0; t < k; ++t) s += a.at(i, t) * b.at(t, j);
      c.at(i, j) = s;
    }
  return c;
}

Tensor transpose(const Tensor& a) {
  Tensor t({a.dim(1), a.dim(0)});
  for (std::size_t i = 0; i < a.dim(0); ++i)
    for (std::size_t j = 0; j < a.dim(1); ++j) t.at(j, i) = a.at(i, j);
  return t;
}

TEST(Kernels, GemmVariantsMatchNaiveOracleForEveryTable) {
  RngState rng(5);
  std::vector<const kernels::KernelTable*> tables{&kernels::scalar_table()};
  for (auto* t : simd_tables()) tables.push_back(t);
  for (const auto* k : tables) {
    for (auto [m, kk, p] : {std::array<std::size_t, 3>{1, 1, 1}, {3, 5, 7}, {8, 16, 4}, {13, 9, 17}}) {
      Tensor a = random_tensor({m, kk}, rng), b = random_tensor({kk, p}, rng);
      Tensor expect = naive_matmul(a, b);

      Tensor c({m, p});
      kernels::gemm_nn(*k, m, kk, p, a.data().data(), b.data().data(), c.data().data(), false);
      testing::expect_near(c, expect, 1e-12);

      Tensor bt = transpose(b);
      Tensor c2({m, p});
      kernels::gemm_nt(*k, m, kk, p, a.data().data(), bt.data().data(), c2.data().data(), false);
      testing::expect_near(c2, expect, 1e-12);

      // C += A^T B with A [m x kk]: compare against naive(A^T, B2).
      Tensor b2 = random_tensor({m, p}, rng);
      Tensor c3 = Tensor::full({kk, p}, 1.0);
      kernels::gemm_tn_acc(*k, m, kk, p, a.data().data(), b2.data().data(), c3.data().data());
      Tensor e3 = naive_matmul(transpose(a), b2);
      for (std::size_t i = 0; i < e3.size(); ++i) e3[i] += 1.0;
      testing::expect_near(c3, e3, 1e-12);
    }
  }
}

TEST(Kernels, OpsAgreeAcrossSelectedTables) {
  RngState rng(3);
  Tensor a = random_tensor({2, 5, 12}, rng), b = random_tensor({12, 7}, rng);
  ASSERT_TRUE(kernels::select(kernels::Isa::kScalar));
  Tensor ref = ops::matmul(constant(a), constant(b)).value();
  for (const auto* t : simd_tables()) {
    ASSERT_TRUE(kernels::select(t->isa));
    testing::expect_near(ops::matmul(constant(a), constant(b)).value(), ref, 1e-12);
  }
  kernels::select(kernels::Isa::kScalar);
}

// --- rng ---------------------------------------------------------------------

TEST(Rng, DeterministicAndInRange) {
  RngState a(42), b(42);
  for (int i = 0; i < 1000; ++i) {
    const double u = a.uniform();
    EXPECT_EQ(u, b.uniform());
    EXPECT_GE(u, 0.0);
    EXPECT_LT(u, 1.0);
  }
  RngState c(1);
  std::vector<int> counts(7, 0);
  for (int i = 0; i < 7000; ++i) ++counts[c.below(7)];
  for (int n : counts) EXPECT_GT(n, 800);
  EXPECT_EQ(c.below(1), 0u);
}

TEST(Rng, ForksAreStableAndDistinct) {
  RngState r(9);
  RngState f1 = r.fork(1), f1b = r.fork(1), f2 = r.fork(2);
  EXPECT_EQ(f1.next_u64(), f1b.next_u64());
  EXPECT_NE(RngState(9).fork(1).next_u64(), f2.next_u64());
  r.next_u64();
  EXPECT_EQ(r.fork(1).next_u64(), RngState(9).fork(1).next_u64());
}

// --- autograd ----------------------------------------------------------------

TEST(Autograd, AccumulatesThroughSharedSubexpressions) {
  Parameter x("x", Tensor::vector({2.0, -3.0}));
  Var v = leaf(x);
  Var y = ops::sum(ops::add(ops::mul(v, v), v));  // sum(x^2 + x)
  backward(y);
  EXPECT_DOUBLE_EQ(x.grad()[0], 5.0);
  EXPECT_DOUBLE_EQ(x.grad()[1], -5.0);
  backward(y);
  EXPECT_DOUBLE_EQ(x.grad()[0], 10.0);
  x.zero_grad();
  EXPECT_EQ(x.grad()[0], 0.0);
}

TEST(Autograd, BackwardNeedsScalar) {
  Parameter x("x", Tensor::vector({1.0, 2.0}));
  EXPECT_THROW(backward(ops::scale(leaf(x), 2.0)), DimensionError);
}

TEST(Autograd, NoGradGuardRecordsNothing) {
  Parameter x("x", Tensor::vector({1.0}));
  {
    NoGradGuard g;
    EXPECT_FALSE(grad_enabled());
    Var y = ops::sum(leaf(x));
    EXPECT_FALSE(y.requires_grad());
  }
  EXPECT_TRUE(grad_enabled());
}

// --- ops ---------------------------------------------------------------------

TEST(Ops, MatmulMatchesNaive) {
  RngState rng(2);
  Tensor a = random_tensor({4, 6}, rng), b = random_tensor({6, 3}, rng);
  testing::expect_near(ops::matmul(constant(a), constant(b)).value(), naive_matmul(a, b), 1e-12);
  EXPECT_THROW(ops::matmul(constant(a), constant(a)), DimensionError);
}

TEST(Ops, MaskedSoftmaxExactZerosAndDegenerateRow) {
  Tensor x = Tensor::matrix({{1.0, 2.0, 3.0}, {0.5, -1.0, 4.0}});
  Tensor mask = Tensor::matrix({{1, 0, 1}, {0, 1, 0}});
  Tensor y = ops::masked_softmax(constant(x), mask).value();
  EXPECT_EQ(y.at(0, 1), 0.0);
  EXPECT_EQ(y.at(1, 0), 0.0);
  EXPECT_EQ(y.at(1, 2), 0.0);
  EXPECT_EQ(y.at(1, 1), 1.0);
  EXPECT_NEAR(y.at(0, 0) + y.at(0, 2), 1.0, 1e-15);
  EXPECT_NEAR(y.at(0, 2) / y.at(0, 0), std::exp(2.0), 1e-12);
  Tensor bad = Tensor::matrix({{1, 0, 1}, {0, 0, 0}});
  EXPECT_THROW(ops::masked_softmax(constant(x), bad), DegenerateRowError);
}

TEST(Ops, LayernormStandardises) {
  RngState rng(8);
  Tensor y = ops::layernorm(constant(random_tensor({3, 10}, rng, -5, 5))).value();
  for (std::size_t r = 0; r < 3; ++r) {
    double m = 0, v = 0;
    for (std::size_t j = 0; j < 10; ++j) m += y.at(r, j);
    m /= 10;
    for (std::size_t j = 0; j < 10; ++j) v += (y.at(r, j) - m) * (y.at(r, j) - m);
    EXPECT_NEAR(m, 0.0, 1e-12);
    EXPECT_NEAR(v / 10, 1.0, 1e-3);
  }
}

TEST(Ops, GeluAndSigmoidValues) {
  Tensor x = Tensor::vector({0.0, 1.0, -1.0});
  Tensor g = ops::gelu(constant(x)).value();
  EXPECT_EQ(g[0], 0.0);
  EXPECT_NEAR(g[1], 0.8411919906082768, 1e-12);  // tanh approximation
  Tensor s = ops::sigmoid(constant(x)).value();
  EXPECT_EQ(s[0], 0.5);
  EXPECT_NEAR(s[1] + s[2], 1.0, 1e-15);
}

TEST(Ops, EmbeddingRejectsOutOfVocabulary) {
  Tensor table({4, 2});
  EXPECT_THROW(ops::embedding(constant(table), {{0, 4}}), DimensionError);
  EXPECT_THROW(ops::embedding(constant(table), {{0, 1}, {2}}), DimensionError);
  EXPECT_EQ(ops::embedding(constant(table), {{3, 1, 1}}).shape(), (Shape{1, 3, 2}));
}

TEST(Ops, SplitMergeHeadsRoundTrip) {
  RngState rng(4);
  Tensor x = random_tensor({2, 5, 8}, rng);
  Var s = ops::split_heads(constant(x), 4);
  EXPECT_EQ(s.shape(), (Shape{2, 4, 5, 2}));
  EXPECT_EQ(ops::merge_heads(s).value(), x);
  EXPECT_THROW(ops::split_heads(constant(x), 3), DimensionError);
}

TEST(Ops, MixAndWeightedSum) {
  Tensor y0 = Tensor::full({2, 1, 2}, 1.0), y1 = Tensor::full({2, 1, 2}, 3.0);
  Tensor g = Tensor::matrix({{0.25, 0.75}, {1.0, 0.0}});
  Tensor m = ops::mix(constant(g), {constant(y0), constant(y1)}).value();
  EXPECT_DOUBLE_EQ(m[0], 2.5);
  EXPECT_DOUBLE_EQ(m[2], 1.0);
  Tensor w = ops::weighted_sum(constant(Tensor::vector({0.5, 0.5})), {constant(y0), constant(y1)}).value();
  EXPECT_DOUBLE_EQ(w[3], 2.0);
}

// --- gradcheck helpers ---------------------------------------------------------

TEST(Gradcheck, FiniteDifferenceOfCubic) {
  Tensor at = Tensor::vector({0.5, -2.0});
  Tensor g = finite_difference_grad([](const Tensor& x) { return x[0] * x[0] * x[0] + 2 * x[1]; }, at);
  EXPECT_NEAR(g[0], 0.75, 1e-9);
  EXPECT_NEAR(g[1], 2.0, 1e-9);
}

TEST(Gradcheck, RelativeErrorFloor) {
  EXPECT_NEAR(max_relative_error(Tensor::vector({1.0}), Tensor::vector({1.1})), 0.1 / 1.1, 1e-15);
  EXPECT_NEAR(max_relative_error(Tensor::vector({1e-9}), Tensor::vector({2e-9})), 1e-3, 1e-12);
}

// --- parameters ----------------------------------------------------------------

TEST(ParameterSet, RejectsDuplicatesAndCounts) {
  ParameterSet s;
  s.add("a", Tensor({2, 3}));
  s.add("b", Tensor({4}));
  EXPECT_THROW(s.add("a", Tensor({1})), ValidationError);
  EXPECT_EQ(s.scalar_count(), 10u);
  EXPECT_NE(s.find("b"), nullptr);
  EXPECT_EQ(s.find("c"), nullptr);
}

TEST(ParameterSet, XavierBounds) {
  RngState rng(1);
  Tensor w = xavier_uniform(10, 30, rng);
  const double a = std::sqrt(6.0 / 40.0);
  for (std::size_t i = 0; i < w.size(); ++i) {
    EXPECT_LE(std::abs(w[i]), a);
  }
  EXPECT_EQ(w.shape(), (Shape{10, 30}));
}

}  // namespace
}  // namespace scs
