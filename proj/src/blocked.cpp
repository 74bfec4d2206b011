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

#include "hdt/blocked.hpp"

#include <string>

#include "hdt/precision.hpp"
#include "hdt/reference.hpp"
#include "kernels.hpp"

namespace hdt {

template <typename T>
Tile16<T> microkernel_16x16(const Tile16<T>& chunk, const Tile16<T>& coeff) {
  Tile16<T> out;
  const std::conditional_t<std::is_same_v<T, double>, internal::PlainF64,
                           internal::PlainF32>
      policy;
  for (std::size_t r = 0; r < kTileDim; ++r) {
    internal::multiply_tile_row(&chunk.values[r * kTileDim],
                                &out.values[r * kTileDim], coeff, policy);
  }
  return out;
}

template Tile16<double> microkernel_16x16(const Tile16<double>&,
                                          const Tile16<double>&);
template Tile16<float> microkernel_16x16(const Tile16<float>&,
                                         const Tile16<float>&);

Tile16<double> full_tile() {
  Tile16<double> t;
  for (std::uint32_t r = 0; r < kTileDim; ++r) {
    for (std::uint32_t c = 0; c < kTileDim; ++c) t(r, c) = hadamard_sign(r, c);
  }
  return t;
}

Tile16<double> build_last_tile(std::uint32_t a) {
  if (a < 1 || a > 3) {
    throw Error(ErrorCode::kBadExponent,
                "residual exponent " + std::to_string(a) + " not in [1, 3]");
  }
  const std::uint32_t block = 1u << a;
  Tile16<double> t;
  for (std::uint32_t r = 0; r < kTileDim; ++r) {
    for (std::uint32_t c = 0; c < kTileDim; ++c) {
      if (r / block == c / block) t(r, c) = hadamard_sign(r % block, c % block);
    }
  }
  return t;
}

ExecutionPlan plan(const TransformSize& size) {
  const TransformSize checked = parse_transform_size(size.d);
  if (checked != size) {
    throw Error(ErrorCode::kUnsupportedSize, "inconsistent factorization");
  }
  ExecutionPlan p{size, {}};
  const Stage diag{TileKind::kDiagonal, size.a, Exchange::kNone};
  const Stage full{TileKind::kFullH16, 0, Exchange::kNone};
  auto with = [](Stage s, Exchange e) {
    s.exchange = e;
    return s;
  };

  if (size.b == 0) {
    // d in {2, 4, 8}: one diagonal-tiled pass on a zero-padded tile row.
    p.stages.push_back(diag);
    return p;
  }
  // The lowest two 16-point digits live inside a 256-element chunk.
  p.stages.push_back(full);
  if (size.d <= kChunkElems) {
    if (size.b == 2) {
      p.stages.push_back(with(full, Exchange::kTransposeWithin256));
    } else if (size.a > 0) {
      p.stages.push_back(with(diag, Exchange::kTransposeWithin256));
    }
    return p;
  }
  p.stages.push_back(with(full, Exchange::kTransposeWithin256));
  // The d/256 factor runs on columns of the transposed view.
  const std::uint32_t columns_len = size.d / kChunkElems;
  if (columns_len < kTileDim) {
    p.stages.push_back(with(diag, Exchange::kTransposeAcross256));
  } else {
    p.stages.push_back(with(full, Exchange::kTransposeAcross256));
    if (size.a > 0) p.stages.push_back(with(diag, Exchange::kTransposeWithin256));
  }
  return p;
}

void hadamard_transform_inplace(Matrix& x, const TransformSize& size,
                                const TransformOptions& opts,
                                EngineStats* stats) {
  validate(opts);
  if (x.cols() != size.d) {
    throw Error(ErrorCode::kDimensionMismatch,
                "matrix has " + std::to_string(x.cols()) +
                    " columns, transform size is " + std::to_string(size.d));
  }
  if (opts.dtype != x.dtype()) {
    throw Error(ErrorCode::kUnsupportedDtype,
                "options dtype does not match the matrix dtype");
  }
  switch (x.dtype()) {
    case ElementType::kF64:
      internal::transform_matrix(x, size, opts.scale, internal::PlainF64{},
                                 opts.workers, stats);
      return;
    case ElementType::kF32:
      internal::transform_matrix(x, size, opts.scale, internal::PlainF32{},
                                 opts.workers, stats);
      return;
    case ElementType::kF16:
    case ElementType::kBF16:
      transform_emulated_inplace(x, size, opts, default_accum_mode(x.dtype()),
                                 stats);
      return;
    case ElementType::kFP8E4M3:
      break;
  }
  throw Error(ErrorCode::kUnsupportedDtype,
              "FP8E4M3 is a quantization target, not a transform dtype");
}

Matrix hadamard_transform(const Matrix& x, const TransformSize& size,
                          const TransformOptions& opts, EngineStats* stats) {
  Matrix out = x;
  hadamard_transform_inplace(out, size, opts, stats);
  return out;
}

void hadamard_transform_rows(std::span<double> data, std::size_t rows,
                             const TransformSize& size, double scale,
                             EngineStats* stats) {
  internal::transform_rows(data, rows, size, scale, internal::PlainF64{}, 1,
                           stats);
}

void hadamard_transform_rows(std::span<float> data, std::size_t rows,
                             const TransformSize& size, double scale,
                             EngineStats* stats) {
  internal::transform_rows(data, rows, size, scale, internal::PlainF32{}, 1,
                           stats);
}

std::uint64_t expected_mac_count(const TransformSize& size,
                                 std::uint64_t rows) {
  return 16ull * rows * size.d * size.iterations();
}

}  // namespace hdt
