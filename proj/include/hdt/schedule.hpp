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

#ifndef HDT_SCHEDULE_HPP_
#define HDT_SCHEDULE_HPP_

#include <cstdint>
#include <span>
#include <vector>

#include "hdt/blocked.hpp"
#include "hdt/core_types.hpp"

namespace hdt {

// Logical model of the GPU decomposition: one threadblock per row,
// `warps_per_block` warps each owning `num_chunks` 256-element chunks.
// Nothing here runs concurrently; warps are visited one after another.

enum class ExchangeScope { kWithinWarp, kThroughSharedMemory };

struct ExchangeEvent {
  std::size_t stage = 0;  // index into the execution plan
  ExchangeScope scope = ExchangeScope::kWithinWarp;
};

// Threadblock-wide sync placed before `before_stage`.
struct BarrierEvent {
  std::size_t before_stage = 0;
};

struct SchedulePlan {
  TransformSize size;
  std::uint32_t warps_per_block = 1;
  std::uint32_t num_chunks = 1;
  ExecutionPlan stages;
  std::vector<BarrierEvent> barriers;
  std::vector<ExchangeEvent> exchanges;
};

// For d > 256 requires 256 * warps_per_block * num_chunks == d; for
// d <= 256 both must be 1. Throws kConstraintViolation otherwise.
SchedulePlan make_schedule(const TransformSize& size,
                           std::uint32_t warps_per_block,
                           std::uint32_t num_chunks);

struct CostReport {
  std::uint64_t rows = 0;
  // Totals over all rows.
  std::uint64_t mac_count = 0;
  std::uint64_t tile_matmul_count = 0;  // 16x16x16 multiplies, rounded up
  std::uint64_t mma_count = 0;          // two 16x16x8 MMAs per tile matmul
  // Per threadblock (one row).
  std::uint64_t barrier_count = 0;
  std::uint64_t smem_exchange_count = 0;
  // Butterfly baseline for the same shape: 2 * m * n * log2(n).
  std::uint64_t scalar_op_count = 0;

  bool operator==(const CostReport&) const = default;
};

struct SimulationResult {
  Matrix output;
  CostReport cost;
};

// Executes the plan warp by warp through a shared-memory staging buffer.
// `warp_order` is a permutation of [0, warps_per_block); empty means
// ascending. Output matches hadamard_transform bitwise for the same dtype.
SimulationResult simulate(const Matrix& x, const SchedulePlan& plan,
                          double scale,
                          std::span<const std::uint32_t> warp_order = {});

// Abstract cost of the butterfly kernel with warp-local exchanges: two
// threadblock syncs whenever data must cross the 256 elements a warp holds.
// The sync onset is a reconstruction, not a measurement.
CostReport baseline_cost(const TransformSize& size, std::uint64_t rows);

std::uint64_t scalar_op_count(const TransformSize& size, std::uint64_t rows);

}  // namespace hdt

#endif  // HDT_SCHEDULE_HPP_
