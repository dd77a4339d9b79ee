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

// Inner-loop kernels for the tensor ops. Each ISA provides a table of the
// same primitives; the active table is chosen once at startup from CPU
// features and can be pinned with SCS_KERNELS=scalar|avx2|neon.

#include <cstddef>
#include <string_view>

namespace scs::kernels {

enum class Isa { kScalar, kAvx2, kNeon };

struct KernelTable {
  Isa isa;
  const char* name;
  // sum_i x[i] * y[i]
  double (*dot)(const double* x, const double* y, std::size_t n);
  // y[i] += alpha * x[i]
  void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
};

const KernelTable& scalar_table();
// nullptr when the ISA was not compiled in or the CPU lacks it.
const KernelTable* avx2_table();
const KernelTable* neon_table();

const KernelTable& active();
// Pins the active table; returns false if the ISA is unavailable.
bool select(Isa isa);
bool select(std::string_view name);

// C[M x P] (+)= A[M x K] * B[K x P]
void gemm_nn(const KernelTable& k, std::size_t m, std::size_t kk, std::size_t p,
             const double* a, const double* b, double* c, bool accumulate);
// C[M x P] (+)= A[M x K] * B[P x K]^T
void gemm_nt(const KernelTable& k, std::size_t m, std::size_t kk, std::size_t p,
             const double* a, const double* b, double* c, bool accumulate);
// C[K x P] += A[M x K]^T * B[M x P]
void gemm_tn_acc(const KernelTable& k, std::size_t m, std::size_t kk, std::size_t p,
                 const double* a, const double* b, double* c);

inline void gemm_nn(std::size_t m, std::size_t kk, std::size_t p, const double* a,
                    const double* b, double* c, bool accumulate) {
  gemm_nn(active(), m, kk, p, a, b, c, accumulate);
}
inline void gemm_nt(std::size_t m, std::size_t kk, std::size_t p, const double* a,
                    const double* b, double* c, bool accumulate) {
  gemm_nt(active(), m, kk, p, a, b, c, accumulate);
}
inline void gemm_tn_acc(std::size_t m, std::size_t kk, std::size_t p, const double* a,
                        const double* b, double* c) {
  gemm_tn_acc(active(), m, kk, p, a, b, c);
}

}  // namespace scs::kernels
