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
#include <atomic>
#include <cstdlib>
#include <cstring>

#include "scs/numerics/kernels.hpp"

namespace scs::kernels {

namespace detail {
#if defined(SCS_HAVE_AVX2)
const KernelTable& avx2_table_impl();
#endif
#if defined(SCS_HAVE_NEON)
const KernelTable& neon_table_impl();
#endif
}  // namespace detail

const KernelTable* avx2_table() {
#if defined(SCS_HAVE_AVX2)
  static const bool supported = __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
  return supported ? &detail::avx2_table_impl() : nullptr;
#else
  return nullptr;
#endif
}

const KernelTable* neon_table() {
#if defined(SCS_HAVE_NEON)
  return &detail::neon_table_impl();
#else
  return nullptr;
#endif
}

namespace {

const KernelTable* table_for(Isa isa) {
  switch (isa) {
    case Isa::kScalar:
      return &scalar_table();
    case Isa::kAvx2:
      return avx2_table();
    case Isa::kNeon:
      return neon_table();
  }
  return nullptr;
}

const KernelTable* best_available() {
  if (const auto* t = avx2_table()) return t;
  if (const auto* t = neon_table()) return t;
  return &scalar_table();
}

const KernelTable* initial_table() {
  if (const char* env = std::getenv("SCS_KERNELS")) {
    for (Isa isa : {Isa::kScalar, Isa::kAvx2, Isa::kNeon}) {
      const KernelTable* t = table_for(isa);
      if (t && std::strcmp(env, t->name) == 0) return t;
    }
  }
  return best_available();
}

std::atomic<const KernelTable*>& current() {
  static std::atomic<const KernelTable*> table{initial_table()};
  return table;
}

}  // namespace

const KernelTable& active() { return *current().load(std::memory_order_acquire); }

bool select(Isa isa) {
  const KernelTable* t = table_for(isa);
  if (!t) return false;
  current().store(t, std::memory_order_release);
  return true;
}

bool select(std::string_view name) {
  if (name == "scalar") return select(Isa::kScalar);
  if (name == "avx2") return select(Isa::kAvx2);
  if (name == "neon") return select(Isa::kNeon);
  return false;
}

void gemm_nn(const KernelTable& k, std::size_t m, std::size_t kk, std::size_t p,
             const double* a, const double* b, double* c, bool accumulate) {
  for (std::size_t i = 0; i < m; ++i) {
    double* crow = c + i * p;
    if (!accumulate) std::memset(crow, 0, p * sizeof(double));
    const double* arow = a + i * kk;
    for (std::size_t t = 0; t < kk; ++t) {
      if (arow[t] != 0.0) k.axpy(arow[t], b + t * p, crow, p);
    }
  }
}

void gemm_nt(const KernelTable& k, std::size_t m, std::size_t kk, std::size_t p,
             const double* a, const double* b, double* c, bool accumulate) {
  for (std::size_t i = 0; i < m; ++i) {
    const double* arow = a + i * kk;
    double* crow = c + i * p;
    for (std::size_t j = 0; j < p; ++j) {
      const double v = k.dot(arow, b + j * kk, kk);
      crow[j] = accumulate ? crow[j] + v : v;
    }
  }
}

void gemm_tn_acc(const KernelTable& k, std::size_t m, std::size_t kk, std::size_t p,
                 const double* a, const double* b, double* c) {
  for (std::size_t r = 0; r < m; ++r) {
    const double* arow = a + r * kk;
    const double* brow = b + r * p;
    for (std::size_t t = 0; t < kk; ++t) {
      if (arow[t] != 0.0) k.axpy(arow[t], brow, c + t * p, p);
    }
  }
}

}  // namespace scs::kernels
