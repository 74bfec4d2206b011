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

#ifndef HDT_BLOCKED_HPP_
#define HDT_BLOCKED_HPP_

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "hdt/core_types.hpp"

namespace hdt {

inline constexpr std::size_t kTileDim = 16;
inline constexpr std::size_t kTileElems = kTileDim * kTileDim;
inline constexpr std::size_t kChunkElems = 256;

// 16x16 row-major tile, the unit of work of the microkernel.
template <typename T>
struct Tile16 {
  std::array<T, kTileElems> values{};

  T& operator()(std::size_t r, std::size_t c) { return values[r * kTileDim + c]; }
  T operator()(std::size_t r, std::size_t c) const {
    return values[r * kTileDim + c];
  }
  bool operator==(const Tile16&) const = default;
};

// chunk * coeff: each row of `chunk` is a group of 16 transform elements.
// Every output sums its 16 products in ascending k starting from zero.
template <typename T>
Tile16<T> microkernel_16x16(const Tile16<T>& chunk, const Tile16<T>& coeff);

// Unnormalized H_16.
Tile16<double> full_tile();
// Block diagonal with 16 / 2^a copies of unnormalized H_{2^a}; a in {1,2,3},
// otherwise kBadExponent.
Tile16<double> build_last_tile(std::uint32_t a);

enum class TileKind { kFullH16, kDiagonal };

enum class Exchange {
  kNone,
  // Transpose a block (a 256-element chunk, or one column after the
  // cross-chunk exchange) to bring the next index digit into the lanes,
  // then transpose back.
  kTransposeWithin256,
  // View the row as (d/256) x 256 and transpose to 256 x (d/256). The
  // transposed layout persists until the row is finished.
  kTransposeAcross256,
};

struct Stage {
  TileKind tile = TileKind::kFullH16;
  std::uint32_t residual_exponent = 0;  // a, set for kDiagonal
  Exchange exchange = Exchange::kNone;  // performed before the multiply

  bool operator==(const Stage&) const = default;
};

struct ExecutionPlan {
  TransformSize size;
  std::vector<Stage> stages;
};

ExecutionPlan plan(const TransformSize& size);

struct EngineStats {
  // Useful-lane MACs: 16 per output element per stage.
  std::uint64_t mac_count = 0;
  // 16-lane tile rows pushed through the microkernel.
  std::uint64_t tile_rows = 0;
};

// out[i, :] = opts.scale * H_d * x[i, :]. F64 runs in double, F32 in
// float; F16/BF16 go through the emulated path with the dtype's default
// accumulation mode. FP8E4M3 is rejected. opts.dtype must equal x.dtype().
void hadamard_transform_inplace(Matrix& x, const TransformSize& size,
                                const TransformOptions& opts,
                                EngineStats* stats = nullptr);
[[nodiscard]] Matrix hadamard_transform(const Matrix& x,
                                        const TransformSize& size,
                                        const TransformOptions& opts,
                                        EngineStats* stats = nullptr);

// Raw-buffer entry point: `data` holds `rows` contiguous rows of size.d.
void hadamard_transform_rows(std::span<double> data, std::size_t rows,
                             const TransformSize& size, double scale,
                             EngineStats* stats = nullptr);
void hadamard_transform_rows(std::span<float> data, std::size_t rows,
                             const TransformSize& size, double scale,
                             EngineStats* stats = nullptr);

// 16 * rows * d * ceil(log16 d).
std::uint64_t expected_mac_count(const TransformSize& size, std::uint64_t rows);

}  // namespace hdt

#endif  // HDT_BLOCKED_HPP_
