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

#include "hdt/reference.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "hdt/float_formats.hpp"

namespace hdt {
namespace {

constexpr std::uint32_t kMaterializeLimit = 4096;
constexpr std::uint32_t kPatternSize = 64;
constexpr std::size_t kRowBlock = 8;

void check_cols(const Matrix& x, std::uint32_t d) {
  if (x.cols() != d) {
    throw Error(ErrorCode::kDimensionMismatch,
                "matrix has " + std::to_string(x.cols()) +
                    " columns, transform size is " + std::to_string(d));
  }
}

// Accumulates out_block += x_block * H where `fill_row(j, buf)` writes row j
// of H. Sums run over j in ascending order for every output element.
template <typename FillRow>
void dense_multiply(const Matrix& x, std::uint32_t d, Matrix& out,
                    FillRow fill_row) {
  std::vector<double> h_row(d);
  for (std::size_t r0 = 0; r0 < x.rows(); r0 += kRowBlock) {
    const std::size_t r1 = std::min(x.rows(), r0 + kRowBlock);
    for (std::uint32_t j = 0; j < d; ++j) {
      fill_row(j, h_row.data());
      for (std::size_t r = r0; r < r1; ++r) {
        const double a = x(r, j);
        double* o = out.row(r).data();
        for (std::uint32_t i = 0; i < d; ++i) o[i] += a * h_row[i];
      }
    }
  }
}

}  // namespace

DenseHadamard::DenseHadamard(TransformSize size,
                             std::vector<std::int8_t> entries)
    : size_(size), entries_(std::move(entries)) {
  if (entries_.size() != static_cast<std::size_t>(size_.d) * size_.d) {
    throw Error(ErrorCode::kDimensionMismatch, "entry count is not d*d");
  }
}

double DenseHadamard::normalization() const noexcept {
  return 1.0 / std::sqrt(static_cast<double>(size_.d));
}

DenseHadamard sylvester(std::uint64_t d) {
  const TransformSize size = parse_transform_size(d);
  const std::size_t n = size.d;
  std::vector<std::int8_t> e(n * n);
  e[0] = 1;
  for (std::size_t k = 1; k < n; k *= 2) {
    // Expand the leading k x k block into 2k x 2k.
    for (std::size_t i = 0; i < k; ++i) {
      for (std::size_t j = 0; j < k; ++j) {
        const std::int8_t v = e[i * n + j];
        e[i * n + j + k] = v;
        e[(i + k) * n + j] = v;
        e[(i + k) * n + j + k] = static_cast<std::int8_t>(-v);
      }
    }
  }
  return DenseHadamard(size, std::move(e));
}

Matrix dense_rotate(const Matrix& x, std::uint32_t d, double scale) {
  parse_transform_size(d);
  check_cols(x, d);
  Matrix out(x.rows(), d, ElementType::kF64);
  if (d <= kMaterializeLimit) {
    const DenseHadamard h = sylvester(d);
    const std::int8_t* e = h.entries().data();
    dense_multiply(x, d, out, [&](std::uint32_t j, double* row) {
      const std::int8_t* src = e + static_cast<std::size_t>(j) * d;
      for (std::uint32_t i = 0; i < d; ++i) row[i] = src[i];
    });
  } else {
    // Row j of H_d, split into 64-wide blocks: the low six index bits pick a
    // row of H_64 and the high bits contribute one sign per block.
    std::vector<double> pattern(kPatternSize * kPatternSize);
    for (std::uint32_t i = 0; i < kPatternSize; ++i) {
      for (std::uint32_t j = 0; j < kPatternSize; ++j) {
        pattern[i * kPatternSize + j] = hadamard_sign(i, j);
      }
    }
    dense_multiply(x, d, out, [&](std::uint32_t j, double* row) {
      const double* lo = pattern.data() + (j % kPatternSize) * kPatternSize;
      const std::uint32_t j_hi = j / kPatternSize;
      for (std::uint32_t blk = 0; blk < d / kPatternSize; ++blk) {
        const double s = hadamard_sign(j_hi, blk);
        double* dst = row + blk * kPatternSize;
        for (std::uint32_t k = 0; k < kPatternSize; ++k) dst[k] = s * lo[k];
      }
    });
  }
  for (double& v : out.data()) v *= scale;
  return out;
}

void fwht_scalar_inplace(Matrix& x, double scale, ScalarStats* stats) {
  const TransformSize size = parse_transform_size(x.cols());
  const std::size_t n = size.d;
  for (std::size_t r = 0; r < x.rows(); ++r) {
    double* a = x.row(r).data();
    for (std::size_t h = 1; h < n; h *= 2) {
      for (std::size_t i = 0; i < n; i += 2 * h) {
        for (std::size_t j = i; j < i + h; ++j) {
          const double u = a[j];
          const double v = a[j + h];
          a[j] = u + v;
          a[j + h] = u - v;
        }
      }
    }
    for (std::size_t j = 0; j < n; ++j) a[j] = round_to(a[j] * scale, x.dtype());
  }
  if (stats != nullptr) {
    stats->mac_equivalents += 4 * (n / 2) * size.log2() * x.rows();
  }
}

Matrix fwht_scalar(const Matrix& x, double scale, ScalarStats* stats) {
  Matrix out = x;
  fwht_scalar_inplace(out, scale, stats);
  return out;
}

}  // namespace hdt
