// Copyright 2026 The hdt Authors
// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "hdt/quant_lab.hpp"

#include <gtest/gtest.h>

#include <cmath>

#include "hdt/blocked.hpp"
#include "test_util.hpp"

namespace hdt {
namespace {

using testing::max_abs;

TEST(OutlierTest, GenerationIsDeterministic) {
  OutlierSpec spec;
  spec.rows = 8;
  spec.cols = 256;
  EXPECT_EQ(gen_outlier_matrix(spec), gen_outlier_matrix(spec));
  OutlierSpec other = spec;
  other.seed = 2;
  EXPECT_NE(gen_outlier_matrix(spec), gen_outlier_matrix(other));
}

TEST(OutlierTest, NoOutliersStaysGaussian) {
  OutlierSpec spec;
  spec.outlier_rate = 0.0;
  const Matrix x = gen_outlier_matrix(spec);
  EXPECT_LT(max_abs(x.data()), 6.0);
}

TEST(OutlierTest, DefaultSpecPlantsExactOutliers) {
  const OutlierSpec spec;
  const Matrix x = gen_outlier_matrix(spec);
  EXPECT_EQ(x.rows(), 64u);
  EXPECT_EQ(x.cols(), 1024u);
  EXPECT_NEAR(max_abs(x.data()), 100.0, 1e-12);
  std::size_t planted = 0;
  for (double v : x.data()) planted += std::fabs(v) == 100.0 ? 1 : 0;
  EXPECT_EQ(planted, 66u);  // round(0.001 * 65536)
}

TEST(OutlierTest, RejectsBadSpecs) {
  auto code = [](OutlierSpec s) {
    try {
      validate(s);
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::kIoError;
  };
  OutlierSpec s;
  s.outlier_rate = 1.5;
  EXPECT_EQ(code(s), ErrorCode::kBadSpec);
  s = {};
  s.base_std = 0.0;
  EXPECT_EQ(code(s), ErrorCode::kBadSpec);
  s = {};
  s.rows = 0;
  EXPECT_EQ(code(s), ErrorCode::kBadSpec);
  s = {};
  s.outlier_scale = 0.5;
  EXPECT_EQ(code(s), ErrorCode::kBadSpec);
}

TEST(QuantizeTest, Int8UnitScaleIsExact) {
  const Matrix x(1, 4, ElementType::kF64, {127.0, -3.0, 0.0, 64.0});
  const QuantizedTensor q = quantize(x, QuantTarget::kINT8, Granularity::kPerTensor);
  ASSERT_EQ(q.scales.size(), 1u);
  EXPECT_EQ(q.scales[0], 1.0);
  EXPECT_EQ(q.codes[1], 0xFD);
  EXPECT_EQ(dequantize(q), x);
}

TEST(QuantizeTest, Fp8MaxIsExact) {
  const Matrix x(1, 3, ElementType::kF64, {448.0, -448.0, 1.0});
  const QuantizedTensor q = quantize(x, QuantTarget::kFP8E4M3, Granularity::kPerTensor);
  EXPECT_EQ(q.scales[0], 1.0);
  EXPECT_EQ(q.codes[0], 0x7E);
  EXPECT_EQ(dequantize(q), x);
}

TEST(QuantizeTest, Int4OutlierCollapsesTheBulk) {
  Matrix x(1, 16, ElementType::kF64);
  for (std::size_t j = 0; j < 16; ++j) x(0, j) = 0.5 * ((j % 3) - 1.0);
  x(0, 7) = 100.0;
  const QuantizedTensor q = quantize(x, QuantTarget::kINT4, Granularity::kPerTensor);
  EXPECT_NEAR(q.scales[0], 100.0 / 7.0, 1e-12);
  const Matrix back = dequantize(q);
  EXPECT_NEAR(back(0, 7), 100.0, 1e-12);
  for (std::size_t j = 0; j < 16; ++j) {
    if (j != 7) EXPECT_EQ(back(0, j), 0.0);
  }
}

TEST(QuantizeTest, PerRowScales) {
  const Matrix x(2, 2, ElementType::kF64, {7.0, 1.0, 0.0, 0.0});
  const QuantizedTensor q = quantize(x, QuantTarget::kINT4, Granularity::kPerRow);
  ASSERT_EQ(q.scales.size(), 2u);
  EXPECT_EQ(q.scales[0], 1.0);
  EXPECT_EQ(q.scales[1], 1.0);  // all-zero row
  EXPECT_EQ(dequantize(q), x);
}

TEST(QuantizeTest, ErrorBoundedByHalfStep) {
  const Matrix x = random_matrix(4, 256, ElementType::kF64, 8);
  for (auto t : {QuantTarget::kINT8, QuantTarget::kINT4}) {
    for (auto g : {Granularity::kPerTensor, Granularity::kPerRow}) {
      const QuantizedTensor q = quantize(x, t, g);
      const Matrix back = dequantize(q);
      for (std::size_t i = 0; i < x.size(); ++i) {
        const double scale = q.scales[g == Granularity::kPerTensor ? 0 : i / 256];
        ASSERT_LE(std::fabs(back.data()[i] - x.data()[i]), 0.5 * scale + 1e-12);
      }
    }
  }
}

TEST(QuantizeTest, AllZeroInput) {
  const Matrix x(3, 8, ElementType::kF64);
  for (auto t : {QuantTarget::kFP8E4M3, QuantTarget::kINT8, QuantTarget::kINT4}) {
    const QuantizedTensor q = quantize(x, t, Granularity::kPerRow);
    for (double s : q.scales) EXPECT_EQ(s, 1.0);
    EXPECT_EQ(dequantize(q), x);
  }
}

TEST(QuantizeTest, NamesParse) {
  EXPECT_EQ(parse_quant_target("int4"), QuantTarget::kINT4);
  EXPECT_EQ(parse_quant_target("FP8E4M3"), QuantTarget::kFP8E4M3);
  EXPECT_EQ(parse_granularity("per_row"), Granularity::kPerRow);
  EXPECT_THROW(parse_quant_target("int2"), Error);
  EXPECT_THROW(parse_granularity("per_col"), Error);
}

TEST(RotationTest, SpikeSpreadsEvenly) {
  for (std::uint32_t d = 2; d <= 32768; d *= 2) {
    const double c = 100.0;
    Matrix x(1, d, ElementType::kF64);
    x(0, 0) = c;
    const TransformSize s = parse_transform_size(d);
    const Matrix y = hadamard_transform(x, s, TransformOptions::normalized(s));
    const double expect = c / std::sqrt(static_cast<double>(d));
    const double spread = c * TransformOptions::normalized(s).scale;
    for (double v : y.data()) ASSERT_EQ(std::fabs(v), spread);
    EXPECT_NEAR(max_abs(y.data()), expect, 1e-12 * expect);
    const Matrix back = hadamard_transform(y, s, TransformOptions::normalized(s));
    EXPECT_NEAR(back(0, 0), c, 1e-10);
  }
}

TEST(ExperimentTest, RotationWinsOnInt4) {
  OutlierSpec spec;
  spec.rows = 16;
  const ExperimentReport r =
      run_experiment(spec, QuantTarget::kINT4, Granularity::kPerTensor, 20);
  EXPECT_EQ(r.trials.size(), 20u);
  EXPECT_GE(r.win_rate, 0.95);
  EXPECT_LT(r.mse_rotated, r.mse_plain);
  EXPECT_LT(r.max_abs_rotated, r.max_abs_plain);
}

TEST(ExperimentTest, Deterministic) {
  OutlierSpec spec;
  spec.rows = 4;
  spec.cols = 256;
  const ExperimentReport a = run_experiment(spec, QuantTarget::kINT8, Granularity::kPerRow, 3);
  const ExperimentReport b = run_experiment(spec, QuantTarget::kINT8, Granularity::kPerRow, 3);
  EXPECT_EQ(a.mse_plain, b.mse_plain);
  EXPECT_EQ(a.mse_rotated, b.mse_rotated);
  EXPECT_NE(a.trials[0].mse_plain, a.trials[1].mse_plain);
}

TEST(ExperimentTest, Errors) {
  OutlierSpec spec;
  try {
    run_experiment(spec, QuantTarget::kINT4, Granularity::kPerTensor, 0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kConfigError);
  }
  spec.cols = 1000;
  EXPECT_THROW(run_experiment(spec, QuantTarget::kINT4, Granularity::kPerTensor, 1),
               Error);
}

TEST(ExperimentTest, RotatedTrialRecoversSignal) {
  const Matrix x = gen_outlier_matrix(OutlierSpec{});
  const TrialResult r = run_trial(x, QuantTarget::kINT8, Granularity::kPerTensor);
  EXPECT_LT(r.mse_rotated, r.mse_plain);
  EXPECT_NEAR(r.max_abs_plain, 100.0, 1e-12);
}

}  // namespace
}  // namespace hdt
