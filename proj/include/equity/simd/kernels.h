// Copyright 2026 The Equity Audit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef EQUITY_SIMD_KERNELS_H_
#define EQUITY_SIMD_KERNELS_H_

#include <cstddef>
#include <span>
#include <string_view>

// Dense double-precision kernels used by the embedding trainer. Every kernel
// has a scalar reference implementation; an AVX2 variant is compiled in a
// separate translation unit and selected at runtime when the CPU supports
// it. Element-wise kernels (axpy, scale, gemv_t, ger, adam) are bit-identical
// across variants. Reductions (dot, gemv) differ only by summation order.
//
// EQUITY_SIMD=scalar|avx2|auto overrides the selection at startup.

namespace equity::simd {

enum class Isa { kScalar, kAvx2 };

std::string_view IsaName(Isa isa);

struct AdamCoefficients {
  double learning_rate;
  double beta1;
  double beta2;
  double epsilon;
  double bias_correction1;  // 1 - beta1^t
  double bias_correction2;  // 1 - beta2^t
};

struct KernelTable {
  Isa isa;
  double (*dot)(const double* a, const double* b, std::size_t n);
  // y += alpha * x
  void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
  void (*scale)(double alpha, double* x, std::size_t n);
  // y = A x, A row-major rows x cols.
  void (*gemv)(const double* a, const double* x, double* y, std::size_t rows,
               std::size_t cols);
  // y = A^T x, A row-major rows x cols, y has cols entries.
  void (*gemv_t)(const double* a, const double* x, double* y,
                 std::size_t rows, std::size_t cols);
  // A += alpha * x y^T
  void (*ger)(double alpha, const double* x, const double* y, double* a,
              std::size_t rows, std::size_t cols);
  void (*adam)(double* param, const double* grad, double* m, double* v,
               std::size_t n, const AdamCoefficients& c);
};

const KernelTable& ScalarKernels();

// Null when the AVX2 variant was not built or the CPU lacks AVX2/FMA.
const KernelTable* Avx2Kernels();

bool CpuSupportsAvx2();

// Kernel table in use by the span wrappers below.
const KernelTable& Kernels();
Isa ActiveIsa();

// Returns false (and leaves the selection unchanged) when `isa` is not
// available on this machine.
bool SetActiveIsa(Isa isa);

double Dot(std::span<const double> a, std::span<const double> b);
void Axpy(double alpha, std::span<const double> x, std::span<double> y);
void Scale(double alpha, std::span<double> x);
void Gemv(std::span<const double> a, std::span<const double> x,
          std::span<double> y);
void GemvTransposed(std::span<const double> a, std::span<const double> x,
                    std::span<double> y);
void Ger(double alpha, std::span<const double> x, std::span<const double> y,
         std::span<double> a);
void AdamStep(std::span<double> param, std::span<const double> grad,
              std::span<double> m, std::span<double> v,
              const AdamCoefficients& c);

}  // namespace equity::simd

#endif  // EQUITY_SIMD_KERNELS_H_
