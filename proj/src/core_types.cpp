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

#include <algorithm>
#include <bit>
#include <cctype>
#include <random>

#include "hdt/float_formats.hpp"

namespace hdt {

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kNotPowerOfTwo:
      return "NotPowerOfTwo";
    case ErrorCode::kOutOfRange:
      return "OutOfRange";
    case ErrorCode::kBadMagic:
      return "BadMagic";
    case ErrorCode::kBadDtypeCode:
      return "BadDtypeCode";
    case ErrorCode::kTruncatedPayload:
      return "TruncatedPayload";
    case ErrorCode::kDimensionMismatch:
      return "DimensionMismatch";
    case ErrorCode::kUnsupportedSize:
      return "UnsupportedSize";
    case ErrorCode::kUnsupportedDtype:
      return "UnsupportedDtype";
    case ErrorCode::kBadExponent:
      return "BadExponent";
    case ErrorCode::kOverflowToInfinity:
      return "OverflowToInfinity";
    case ErrorCode::kConstraintViolation:
      return "ConstraintViolation";
    case ErrorCode::kBadSpec:
      return "BadSpec";
    case ErrorCode::kConfigError:
      return "ConfigError";
    case ErrorCode::kIoError:
      return "IoError";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(error_code_name(code)) + ": " + message),
      code_(code) {}

std::string_view element_type_name(ElementType t) {
  switch (t) {
    case ElementType::kF64:
      return "f64";
    case ElementType::kF32:
      return "f32";
    case ElementType::kF16:
      return "f16";
    case ElementType::kBF16:
      return "bf16";
    case ElementType::kFP8E4M3:
      return "fp8e4m3";
  }
  return "unknown";
}

ElementType parse_element_type(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  for (auto t : {ElementType::kF64, ElementType::kF32, ElementType::kF16,
                 ElementType::kBF16, ElementType::kFP8E4M3}) {
    if (lower == element_type_name(t)) return t;
  }
  throw Error(ErrorCode::kConfigError, "unknown dtype '" + lower + "'");
}

std::size_t element_size(ElementType t) {
  switch (t) {
    case ElementType::kF64:
      return 8;
    case ElementType::kF32:
      return 4;
    case ElementType::kF16:
    case ElementType::kBF16:
      return 2;
    case ElementType::kFP8E4M3:
      return 1;
  }
  return 0;
}

Matrix::Matrix(std::size_t rows, std::size_t cols, ElementType dtype)
    : rows_(rows), cols_(cols), dtype_(dtype), data_(rows * cols, 0.0) {}

Matrix::Matrix(std::size_t rows, std::size_t cols, ElementType dtype,
               std::vector<double> data)
    : rows_(rows), cols_(cols), dtype_(dtype), data_(std::move(data)) {
  if (data_.size() != rows_ * cols_) {
    throw Error(ErrorCode::kDimensionMismatch,
                "buffer holds " + std::to_string(data_.size()) +
                    " values, expected " + std::to_string(rows_ * cols_));
  }
}

Matrix Matrix::from_values(std::size_t rows, std::size_t cols,
                           ElementType dtype, std::span<const double> values) {
  std::vector<double> data(values.begin(), values.end());
  for (double& v : data) v = round_to(v, dtype);
  return Matrix(rows, cols, dtype, std::move(data));
}

Matrix random_matrix(std::size_t rows, std::size_t cols, ElementType dtype,
                     std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> values(rows * cols);
  for (double& v : values) v = normal(rng);
  return Matrix::from_values(rows, cols, dtype, values);
}

TransformSize parse_transform_size(std::uint64_t d) {
  if (d == 0 || !std::has_single_bit(d)) {
    throw Error(ErrorCode::kNotPowerOfTwo,
                std::to_string(d) + " is not a power of two");
  }
  if (d < kMinTransformSize || d > kMaxTransformSize) {
    throw Error(ErrorCode::kOutOfRange,
                "size " + std::to_string(d) + " outside [2, 32768]");
  }
  const auto log2 = static_cast<std::uint32_t>(std::countr_zero(d));
  return TransformSize{static_cast<std::uint32_t>(d), log2 % 4, log2 / 4};
}

void validate(const TransformOptions& opts) {
  if (!(opts.scale > 0.0) || !std::isfinite(opts.scale)) {
    throw Error(ErrorCode::kConfigError, "scale must be finite and positive");
  }
}

}  // namespace hdt
