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

#include <atomic>
#include <cstdlib>
#include <string>

#include "equity/core/error.h"
#include "equity/simd/kernels.h"

namespace equity::simd {

#if EQUITY_HAVE_AVX2
const KernelTable& Avx2KernelTable();
#endif

namespace {

const KernelTable* InitialTable() {
  const char* env = std::getenv("EQUITY_SIMD");
  const std::string choice = env == nullptr ? "auto" : env;
  if (choice == "scalar") return &ScalarKernels();
  if (const KernelTable* avx2 = Avx2Kernels()) return avx2;
  return &ScalarKernels();
}

std::atomic<const KernelTable*>& Active() {
  static std::atomic<const KernelTable*> active{InitialTable()};
  return active;
}

void CheckSameSize(std::size_t a, std::size_t b, const char* what) {
  if (a != b) {
    throw ContractError(std::string(what) + ": size mismatch (" +
                        std::to_string(a) + " vs " + std::to_string(b) + ")");
  }
}

}  // namespace

std::string_view IsaName(Isa isa) {
  return isa == Isa::kAvx2 ? "avx2" : "scalar";
}

bool CpuSupportsAvx2() {
#if defined(__x86_64__) || defined(__i386__)
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

const KernelTable* Avx2Kernels() {
#if EQUITY_HAVE_AVX2
  static const bool supported = CpuSupportsAvx2();
  return supported ? &Avx2KernelTable() : nullptr;
#else
  return nullptr;
#endif
}

const KernelTable& Kernels() { return *Active().load(); }

Isa ActiveIsa() { return Kernels().isa; }

bool SetActiveIsa(Isa isa) {
  const KernelTable* table =
      isa == Isa::kScalar ? &ScalarKernels() : Avx2Kernels();
  if (table == nullptr) return false;
  Active().store(table);
  return true;
}

double Dot(std::span<const double> a, std::span<const double> b) {
  CheckSameSize(a.size(), b.size(), "Dot");
  return Kernels().dot(a.data(), b.data(), a.size());
}

void Axpy(double alpha, std::span<const double> x, std::span<double> y) {
  CheckSameSize(x.size(), y.size(), "Axpy");
  Kernels().axpy(alpha, x.data(), y.data(), x.size());
}

void Scale(double alpha, std::span<double> x) {
  Kernels().scale(alpha, x.data(), x.size());
}

void Gemv(std::span<const double> a, std::span<const double> x,
          std::span<double> y) {
  CheckSameSize(a.size(), x.size() * y.size(), "Gemv");
  Kernels().gemv(a.data(), x.data(), y.data(), y.size(), x.size());
}

void GemvTransposed(std::span<const double> a, std::span<const double> x,
                    std::span<double> y) {
  CheckSameSize(a.size(), x.size() * y.size(), "GemvTransposed");
  Kernels().gemv_t(a.data(), x.data(), y.data(), x.size(), y.size());
}

void Ger(double alpha, std::span<const double> x, std::span<const double> y,
         std::span<double> a) {
  CheckSameSize(a.size(), x.size() * y.size(), "Ger");
  Kernels().ger(alpha, x.data(), y.data(), a.data(), x.size(), y.size());
}

void AdamStep(std::span<double> param, std::span<const double> grad,
              std::span<double> m, std::span<double> v,
              const AdamCoefficients& c) {
  CheckSameSize(param.size(), grad.size(), "AdamStep");
  CheckSameSize(param.size(), m.size(), "AdamStep");
  CheckSameSize(param.size(), v.size(), "AdamStep");
  Kernels().adam(param.data(), grad.data(), m.data(), v.data(), param.size(),
                 c);
}

}  // namespace equity::simd
