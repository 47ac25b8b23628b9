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

#include "equity/simd/kernels.h"

#include <cmath>
#include <random>
#include <vector>

#include <gtest/gtest.h>

namespace equity::simd {
namespace {

std::vector<double> Random(std::mt19937_64& rng, std::size_t n) {
  std::normal_distribution<double> normal;
  std::vector<double> out(n);
  for (double& v : out) v = normal(rng);
  return out;
}

class SimdEquivalenceTest : public ::testing::TestWithParam<std::size_t> {
 protected:
  void SetUp() override {
    avx2_ = Avx2Kernels();
    if (avx2_ == nullptr) GTEST_SKIP() << "AVX2 kernels unavailable";
  }
  const KernelTable& scalar_ = ScalarKernels();
  const KernelTable* avx2_ = nullptr;
  std::mt19937_64 rng_{GetParam() * 7 + 1};
};

// Odd sizes exercise the scalar tails after the 4-wide loops.
INSTANTIATE_TEST_SUITE_P(Sizes, SimdEquivalenceTest,
                         ::testing::Values(0, 1, 3, 4, 7, 16, 33, 64, 257));

TEST_P(SimdEquivalenceTest, Dot) {
  const std::size_t n = GetParam();
  const auto a = Random(rng_, n), b = Random(rng_, n);
  const double s = scalar_.dot(a.data(), b.data(), n);
  const double v = avx2_->dot(a.data(), b.data(), n);
  double magnitude = 0;
  for (std::size_t i = 0; i < n; ++i) magnitude += std::abs(a[i] * b[i]);
  EXPECT_NEAR(s, v, 1e-14 * (1 + magnitude));
}

TEST_P(SimdEquivalenceTest, AxpyAndScaleBitIdentical) {
  const std::size_t n = GetParam();
  const auto x = Random(rng_, n);
  auto y1 = Random(rng_, n);
  auto y2 = y1;
  scalar_.axpy(0.37, x.data(), y1.data(), n);
  avx2_->axpy(0.37, x.data(), y2.data(), n);
  EXPECT_EQ(y1, y2);
  scalar_.scale(-1.5, y1.data(), n);
  avx2_->scale(-1.5, y2.data(), n);
  EXPECT_EQ(y1, y2);
}

TEST_P(SimdEquivalenceTest, Gemv) {
  const std::size_t rows = GetParam() % 13 + 1, cols = GetParam();
  const auto a = Random(rng_, rows * cols), x = Random(rng_, cols);
  std::vector<double> y1(rows), y2(rows);
  scalar_.gemv(a.data(), x.data(), y1.data(), rows, cols);
  avx2_->gemv(a.data(), x.data(), y2.data(), rows, cols);
  for (std::size_t i = 0; i < rows; ++i) EXPECT_NEAR(y1[i], y2[i], 1e-12);
}

TEST_P(SimdEquivalenceTest, GemvTransposedBitIdentical) {
  const std::size_t rows = GetParam() % 11 + 1, cols = GetParam();
  const auto a = Random(rng_, rows * cols), x = Random(rng_, rows);
  std::vector<double> y1(cols), y2(cols);
  scalar_.gemv_t(a.data(), x.data(), y1.data(), rows, cols);
  avx2_->gemv_t(a.data(), x.data(), y2.data(), rows, cols);
  EXPECT_EQ(y1, y2);
}

TEST_P(SimdEquivalenceTest, GerBitIdentical) {
  const std::size_t rows = GetParam() % 9 + 1, cols = GetParam();
  const auto x = Random(rng_, rows), y = Random(rng_, cols);
  auto a1 = Random(rng_, rows * cols);
  auto a2 = a1;
  scalar_.ger(0.25, x.data(), y.data(), a1.data(), rows, cols);
  avx2_->ger(0.25, x.data(), y.data(), a2.data(), rows, cols);
  EXPECT_EQ(a1, a2);
}

TEST_P(SimdEquivalenceTest, AdamBitIdentical) {
  const std::size_t n = GetParam();
  auto p1 = Random(rng_, n), m1 = Random(rng_, n), v1 = Random(rng_, n);
  for (double& v : v1) v = v * v;
  const auto grad = Random(rng_, n);
  auto p2 = p1, m2 = m1, v2 = v1;
  const AdamCoefficients c{1e-3, 0.9, 0.999, 1e-8, 1 - 0.9 * 0.9,
                           1 - 0.999 * 0.999};
  for (int step = 0; step < 3; ++step) {
    scalar_.adam(p1.data(), grad.data(), m1.data(), v1.data(), n, c);
    avx2_->adam(p2.data(), grad.data(), m2.data(), v2.data(), n, c);
  }
  EXPECT_EQ(p1, p2);
  EXPECT_EQ(m1, m2);
  EXPECT_EQ(v1, v2);
}

TEST(SimdDispatchTest, ScalarAlwaysSelectable) {
  const Isa before = ActiveIsa();
  ASSERT_TRUE(SetActiveIsa(Isa::kScalar));
  EXPECT_EQ(ActiveIsa(), Isa::kScalar);
  EXPECT_EQ(Kernels().isa, Isa::kScalar);
  EXPECT_EQ(SetActiveIsa(Isa::kAvx2), Avx2Kernels() != nullptr);
  SetActiveIsa(before);
  EXPECT_EQ(IsaName(Isa::kScalar), "scalar");
}

TEST(SimdDispatchTest, SpanWrappersMatchHandComputation) {
  const std::vector<double> a = {1, 2, 3, 4, 5, 6};  // 2 x 3
  const std::vector<double> x = {1, 0, -1};
  std::vector<double> y(2);
  Gemv(a, x, y);
  EXPECT_EQ(y, (std::vector<double>{-2, -2}));
  std::vector<double> yt(3);
  GemvTransposed(a, std::vector<double>{1, 1}, yt);
  EXPECT_EQ(yt, (std::vector<double>{5, 7, 9}));
  EXPECT_DOUBLE_EQ(Dot(x, x), 2.0);
}

}  // namespace
}  // namespace equity::simd
