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

#include "hdt/schedule.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "hdt/precision.hpp"
#include "kernels.hpp"

namespace hdt {
namespace {

std::vector<std::uint32_t> resolve_order(std::span<const std::uint32_t> order,
                                         std::uint32_t warps) {
  std::vector<std::uint32_t> out(order.begin(), order.end());
  if (out.empty()) {
    out.resize(warps);
    std::iota(out.begin(), out.end(), 0u);
    return out;
  }
  std::vector<std::uint32_t> sorted = out;
  std::sort(sorted.begin(), sorted.end());
  for (std::uint32_t i = 0; i < sorted.size(); ++i) {
    if (sorted.size() != warps || sorted[i] != i) {
      throw Error(ErrorCode::kConstraintViolation,
                  "warp order is not a permutation of the block's warps");
    }
  }
  return out;
}

struct Counters {
  EngineStats engine;
  std::uint64_t barriers = 0;
  std::uint64_t smem_exchanges = 0;
};

template <typename P, typename T = typename P::value_type>
void simulate_row(std::span<T> row, const SchedulePlan& plan,
                  std::span<const std::uint32_t> order,
                  const internal::Coefficients<T>& coeffs, const P& p,
                  double scale, std::vector<T>& staging,
                  std::vector<T>& local, std::vector<T>& scratch,
                  Counters& counters) {
  const std::size_t d = plan.size.d;
  const std::span<const Stage> stages(plan.stages.stages);
  const std::size_t split = internal::across_stage_index(plan.stages);

  if (split == stages.size()) {
    // Single warp, single chunk: everything stays in registers.
    local.assign(row.begin(), row.end());
    internal::run_stages(std::span<T>(local), stages, d, coeffs, p, scratch,
                         &counters.engine);
    for (std::size_t i = 0; i < d; ++i) row[i] = p.scale(local[i], scale);
    return;
  }

  // Steps 1-2: each warp transforms its 256-element chunks and stores them.
  staging.resize(d);
  local.resize(kChunkElems);
  for (std::uint32_t w : order) {
    for (std::uint32_t c = 0; c < plan.num_chunks; ++c) {
      const std::size_t off =
          (static_cast<std::size_t>(w) * plan.num_chunks + c) * kChunkElems;
      std::copy_n(row.data() + off, kChunkElems, local.data());
      internal::run_stages(std::span<T>(local), stages.first(split),
                           kChunkElems, coeffs, p, scratch, &counters.engine);
      std::copy_n(local.data(), kChunkElems, staging.data() + off);
    }
  }

  // Step 3.
  counters.barriers += plan.barriers.size();

  // Steps 4-5: read whole columns of the (d/256) x 256 view back, 256
  // elements per chunk, and finish the d/256-point transform on them.
  const std::size_t col_len = d / kChunkElems;
  const std::size_t cols_per_chunk = kChunkElems / col_len;
  counters.smem_exchanges += 1;
  for (std::uint32_t w : order) {
    for (std::uint32_t c = 0; c < plan.num_chunks; ++c) {
      const std::size_t col0 =
          (static_cast<std::size_t>(w) * plan.num_chunks + c) * cols_per_chunk;
      for (std::size_t k = 0; k < cols_per_chunk; ++k) {
        for (std::size_t i = 0; i < col_len; ++i) {
          local[k * col_len + i] = staging[i * kChunkElems + col0 + k];
        }
      }
      internal::run_stages(std::span<T>(local), stages.subspan(split), col_len,
                           coeffs, p, scratch, &counters.engine);
      for (std::size_t k = 0; k < cols_per_chunk; ++k) {
        for (std::size_t i = 0; i < col_len; ++i) {
          row[i * kChunkElems + col0 + k] = p.scale(local[k * col_len + i], scale);
        }
      }
    }
  }
}

template <typename P>
CostReport run_simulation(Matrix& x, const SchedulePlan& plan,
                          std::span<const std::uint32_t> order, const P& p,
                          double scale) {
  using T = typename P::value_type;
  const std::size_t d = plan.size.d;
  std::vector<T> buf(x.data().begin(), x.data().end());
  const internal::Coefficients<T> coeffs;
  std::vector<T> staging, local, scratch(d);
  Counters counters;
  for (std::size_t r = 0; r < x.rows(); ++r) {
    simulate_row(std::span<T>(buf).subspan(r * d, d), plan, order, coeffs, p,
                 scale, staging, local, scratch, counters);
  }
  std::copy(buf.begin(), buf.end(), x.data().begin());

  CostReport cost;
  cost.rows = x.rows();
  cost.mac_count = counters.engine.mac_count;
  cost.tile_matmul_count = (cost.mac_count + kTileElems * kTileDim - 1) /
                           (kTileElems * kTileDim);
  cost.mma_count = 2 * cost.tile_matmul_count;
  if (x.rows() > 0) {
    cost.barrier_count = counters.barriers / x.rows();
    cost.smem_exchange_count = counters.smem_exchanges / x.rows();
  }
  cost.scalar_op_count = scalar_op_count(plan.size, x.rows());
  return cost;
}

}  // namespace

SchedulePlan make_schedule(const TransformSize& size,
                           std::uint32_t warps_per_block,
                           std::uint32_t num_chunks) {
  SchedulePlan sp;
  sp.size = size;
  sp.warps_per_block = warps_per_block;
  sp.num_chunks = num_chunks;
  sp.stages = plan(size);
  if (size.d <= kChunkElems) {
    if (warps_per_block != 1 || num_chunks != 1) {
      throw Error(ErrorCode::kConstraintViolation,
                  "sizes up to 256 run as one warp with one chunk");
    }
  } else {
    const std::uint64_t covered =
        256ull * warps_per_block * static_cast<std::uint64_t>(num_chunks);
    if (covered != size.d) {
      throw Error(ErrorCode::kConstraintViolation,
                  "256 * " + std::to_string(warps_per_block) + " * " +
                      std::to_string(num_chunks) + " = " +
                      std::to_string(covered) +
                      " != " + std::to_string(size.d));
    }
  }
  for (std::size_t i = 0; i < sp.stages.stages.size(); ++i) {
    switch (sp.stages.stages[i].exchange) {
      case Exchange::kNone:
        break;
      case Exchange::kTransposeWithin256:
        sp.exchanges.push_back({i, ExchangeScope::kWithinWarp});
        break;
      case Exchange::kTransposeAcross256:
        sp.barriers.push_back({i});
        sp.exchanges.push_back({i, ExchangeScope::kThroughSharedMemory});
        break;
    }
  }
  return sp;
}

SimulationResult simulate(const Matrix& x, const SchedulePlan& plan,
                          double scale,
                          std::span<const std::uint32_t> warp_order) {
  if (x.cols() != plan.size.d) {
    throw Error(ErrorCode::kDimensionMismatch,
                "matrix has " + std::to_string(x.cols()) +
                    " columns, schedule size is " +
                    std::to_string(plan.size.d));
  }
  const std::vector<std::uint32_t> order =
      resolve_order(warp_order, plan.warps_per_block);
  SimulationResult result{x, {}};
  Matrix& out = result.output;
  switch (x.dtype()) {
    case ElementType::kF64:
      result.cost = run_simulation(out, plan, order, internal::PlainF64{}, scale);
      break;
    case ElementType::kF32:
      result.cost = run_simulation(out, plan, order, internal::PlainF32{}, scale);
      break;
    case ElementType::kF16:
      result.cost = run_simulation(
          out, plan, order, internal::NarrowAccumulate{x.dtype()}, scale);
      break;
    case ElementType::kBF16:
      result.cost = run_simulation(
          out, plan, order, internal::WideThenConvert{x.dtype()}, scale);
      break;
    case ElementType::kFP8E4M3:
      throw Error(ErrorCode::kUnsupportedDtype,
                  "FP8E4M3 is not a transform dtype");
  }
  return result;
}

std::uint64_t scalar_op_count(const TransformSize& size, std::uint64_t rows) {
  return 2ull * rows * size.d * size.log2();
}

CostReport baseline_cost(const TransformSize& size, std::uint64_t rows) {
  CostReport c;
  c.rows = rows;
  c.scalar_op_count = scalar_op_count(size, rows);
  c.mac_count = c.scalar_op_count;
  const bool crosses_warps = size.d > kChunkElems;
  c.barrier_count = crosses_warps ? 2 : 0;
  c.smem_exchange_count = crosses_warps ? 2 : 0;
  return c;
}

}  // namespace hdt
