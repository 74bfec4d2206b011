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

#include "hdt/core_types.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <set>
#include <utility>

namespace hdt {
namespace {

ErrorCode code_of(std::uint64_t d) {
  try {
    parse_transform_size(d);
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error for " << d;
  return ErrorCode::kIoError;
}

TEST(TransformSizeTest, Examples) {
  EXPECT_EQ(parse_transform_size(256), (TransformSize{256, 0, 2}));
  EXPECT_EQ(parse_transform_size(512), (TransformSize{512, 1, 2}));
  const TransformSize s8k = parse_transform_size(8192);
  EXPECT_EQ(s8k, (TransformSize{8192, 1, 3}));
  EXPECT_EQ(s8k.iterations(), 4u);
  EXPECT_EQ(code_of(100), ErrorCode::kNotPowerOfTwo);
}

TEST(TransformSizeTest, RejectsOutOfRange) {
  EXPECT_EQ(code_of(0), ErrorCode::kNotPowerOfTwo);
  EXPECT_EQ(code_of(1), ErrorCode::kOutOfRange);
  EXPECT_EQ(code_of(65536), ErrorCode::kOutOfRange);
  EXPECT_EQ(code_of(3), ErrorCode::kNotPowerOfTwo);
  EXPECT_EQ(code_of(32769), ErrorCode::kNotPowerOfTwo);
}

// Total over [2, 32768] and a bijection onto the valid (a, b) pairs.
TEST(TransformSizeTest, FactorizationInvariants) {
  std::set<std::pair<std::uint32_t, std::uint32_t>> seen;
  for (std::uint64_t d = 2; d <= 32768; d *= 2) {
    const TransformSize s = parse_transform_size(d);
    EXPECT_EQ((1ull << s.a) * static_cast<std::uint64_t>(std::pow(16, s.b)), d);
    EXPECT_LE(s.a, 3u);
    EXPECT_EQ(s.a == 0, d == 16 || d == 256 || d == 4096);
    EXPECT_EQ(s.iterations(),
              static_cast<std::uint32_t>(std::ceil(std::log2(d) / 4.0 - 1e-12)));
    // 16^b <= d <= 16^(b + min(a, 1))
    EXPECT_LE(std::pow(16.0, s.b), d);
    EXPECT_GE(std::pow(16.0, s.b + std::min(s.a, 1u)), d);
    EXPECT_TRUE(seen.insert({s.a, s.b}).second);
  }
  EXPECT_EQ(seen.size(), 15u);
}

TEST(MatrixTest, RowMajorLayout) {
  Matrix m(2, 3, ElementType::kF64, {0, 1, 2, 3, 4, 5});
  EXPECT_EQ(m(1, 0), 3.0);
  EXPECT_EQ(m(0, 2), 2.0);
  EXPECT_EQ(m.row(1)[2], 5.0);
  EXPECT_EQ(m.size(), 6u);
}

TEST(MatrixTest, SizeMismatchThrows) {
  try {
    Matrix m(2, 3, ElementType::kF64, std::vector<double>(5));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDimensionMismatch);
  }
}

TEST(MatrixTest, FromValuesRoundsIntoDtype) {
  const std::vector<double> v{0.2, 1000.0};
  const Matrix m = Matrix::from_values(1, 2, ElementType::kFP8E4M3, v);
  EXPECT_EQ(m(0, 1), 448.0);
  const Matrix f = Matrix::from_values(1, 2, ElementType::kF32, v);
  EXPECT_EQ(f(0, 0), static_cast<double>(0.2f));
}

TEST(MatrixTest, RandomMatrixIsDeterministic) {
  EXPECT_EQ(random_matrix(3, 8, ElementType::kBF16, 5),
            random_matrix(3, 8, ElementType::kBF16, 5));
  EXPECT_NE(random_matrix(3, 8, ElementType::kF64, 5),
            random_matrix(3, 8, ElementType::kF64, 6));
}

TEST(ElementTypeTest, NamesRoundTrip) {
  for (auto t : {ElementType::kF64, ElementType::kF32, ElementType::kF16,
                 ElementType::kBF16, ElementType::kFP8E4M3}) {
    EXPECT_EQ(parse_element_type(element_type_name(t)), t);
  }
  EXPECT_EQ(parse_element_type("BF16"), ElementType::kBF16);
  EXPECT_THROW(parse_element_type("f8"), Error);
}

TEST(TransformOptionsTest, ScaleMustBePositive) {
  TransformOptions opts;
  opts.scale = 0.0;
  EXPECT_THROW(validate(opts), Error);
  opts.scale = -1.0;
  EXPECT_THROW(validate(opts), Error);
  EXPECT_NO_THROW(validate(TransformOptions::normalized(parse_transform_size(64))));
  EXPECT_DOUBLE_EQ(TransformOptions::normalized(parse_transform_size(64)).scale,
                   0.125);
}

}  // namespace
}  // namespace hdt
