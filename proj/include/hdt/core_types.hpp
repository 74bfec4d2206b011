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

#ifndef HDT_CORE_TYPES_HPP_
#define HDT_CORE_TYPES_HPP_

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace hdt {

enum class ErrorCode {
  kNotPowerOfTwo,
  kOutOfRange,
  kBadMagic,
  kBadDtypeCode,
  kTruncatedPayload,
  kDimensionMismatch,
  kUnsupportedSize,
  kUnsupportedDtype,
  kBadExponent,
  kOverflowToInfinity,
  kConstraintViolation,
  kBadSpec,
  kConfigError,
  kIoError,
};

std::string_view error_code_name(ErrorCode code);

// All library failures are reported through this exception type.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

// Storage precision of a Matrix. The narrow formats are emulated in
// software; their values are kept in double but are always exactly
// representable in the tagged format.
enum class ElementType : std::uint8_t {
  kF64 = 0,
  kF32 = 1,
  kF16 = 2,
  kBF16 = 3,
  kFP8E4M3 = 4,
};

std::string_view element_type_name(ElementType t);
// Accepts "f64", "f32", "f16", "bf16", "fp8e4m3" (case-insensitive).
ElementType parse_element_type(std::string_view name);
// Bytes per element in the HDT1 file payload.
std::size_t element_size(ElementType t);

// Dense row-major 2-D buffer; element (i, j) lives at data[i * cols + j].
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, ElementType dtype);
  // Takes values verbatim; throws kDimensionMismatch on a size mismatch.
  // Callers are responsible for values being representable in dtype.
  Matrix(std::size_t rows, std::size_t cols, ElementType dtype,
         std::vector<double> data);

  // Rounds every value into dtype (saturating for FP8E4M3, throwing on
  // F16/BF16 overflow).
  static Matrix from_values(std::size_t rows, std::size_t cols,
                            ElementType dtype, std::span<const double> values);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t size() const noexcept { return data_.size(); }
  ElementType dtype() const noexcept { return dtype_; }

  double& operator()(std::size_t i, std::size_t j) {
    return data_[i * cols_ + j];
  }
  double operator()(std::size_t i, std::size_t j) const {
    return data_[i * cols_ + j];
  }

  std::span<double> row(std::size_t i) {
    return {data_.data() + i * cols_, cols_};
  }
  std::span<const double> row(std::size_t i) const {
    return {data_.data() + i * cols_, cols_};
  }

  std::span<double> data() noexcept { return data_; }
  std::span<const double> data() const noexcept { return data_; }

  bool operator==(const Matrix& other) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  ElementType dtype_ = ElementType::kF64;
  std::vector<double> data_;
};

// Gaussian N(0, 1) entries rounded into dtype; deterministic per seed.
Matrix random_matrix(std::size_t rows, std::size_t cols, ElementType dtype,
                     std::uint64_t seed);

inline constexpr std::uint32_t kMinTransformSize = 2;
inline constexpr std::uint32_t kMaxTransformSize = 32768;

// A power-of-two transform size factored as d = 2^a * 16^b with 0 <= a <= 3.
struct TransformSize {
  std::uint32_t d = 0;
  std::uint32_t a = 0;  // residual power-of-two exponent
  std::uint32_t b = 0;  // number of full 16-point stages

  // Number of 16x16 passes the blocked engine runs: ceil(log16 d).
  std::uint32_t iterations() const noexcept { return b + (a > 0 ? 1 : 0); }
  std::uint32_t log2() const noexcept { return a + 4 * b; }

  bool operator==(const TransformSize&) const = default;
};

// Throws kNotPowerOfTwo or kOutOfRange.
TransformSize parse_transform_size(std::uint64_t d);

struct TransformOptions {
  bool in_place = true;
  // Applied once after the last stage. 1/sqrt(d) gives the orthogonal
  // (normalized) transform.
  double scale = 1.0;
  ElementType dtype = ElementType::kF64;
  // Row-parallel workers; 0 means std::thread::hardware_concurrency().
  unsigned workers = 1;

  static TransformOptions normalized(const TransformSize& size,
                                     ElementType dtype = ElementType::kF64) {
    TransformOptions opts;
    opts.scale = 1.0 / std::sqrt(static_cast<double>(size.d));
    opts.dtype = dtype;
    return opts;
  }
};

// Throws kConfigError unless scale is finite and positive.
void validate(const TransformOptions& opts);

}  // namespace hdt

#endif  // HDT_CORE_TYPES_HPP_
