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

#ifndef HDT_TOOLS_COMMANDS_HPP_
#define HDT_TOOLS_COMMANDS_HPP_

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "hdt/blocked.hpp"
#include "hdt/core_types.hpp"
#include "hdt/quant_lab.hpp"
#include "hdt/schedule.hpp"

namespace hdt::cli {

// Exit codes shared by all subcommands.
inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitUsage = 2;

// Engine under test; the default is hadamard_transform_inplace.
using EngineFn = std::function<void(Matrix&, const TransformSize&,
                                    const TransformOptions&)>;

struct VerifyConfig {
  std::uint32_t max_size = kMaxTransformSize;
  std::uint64_t seed = 0;
  std::size_t rows = 2;
};

int cmd_verify(const VerifyConfig& config, std::ostream& out,
               const EngineFn& engine = {});

struct BenchConfig {
  std::vector<std::uint32_t> sizes;
  std::vector<std::uint64_t> element_counts;
  std::vector<ElementType> dtypes{ElementType::kF32};
  // Any of "scalar", "blocked", "dense_oracle".
  std::vector<std::string> impls{"scalar", "blocked"};
  unsigned repetitions = 5;
  unsigned warmup = 1;
  std::uint64_t seed = 0;
  unsigned workers = 0;  // 0: hardware concurrency
};

// Throws kConfigError.
void validate(const BenchConfig& config);

struct BenchRow {
  std::string impl;
  std::uint32_t size = 0;
  std::uint64_t element_count = 0;
  ElementType dtype = ElementType::kF32;
  double median_ns = 0.0;
  double p10_ns = 0.0;
  double p90_ns = 0.0;
  std::uint64_t mac_count = 0;
};

// Runs every (impl, size, element_count, dtype) combination; rows are
// streamed to `out` as CSV when it is non-null.
std::vector<BenchRow> run_bench(const BenchConfig& config, std::ostream* out);
int cmd_bench(const BenchConfig& config, std::ostream& out, std::ostream& err);

struct TransformConfig {
  std::string input;
  std::string output;
  std::uint32_t size = 0;
  std::optional<ElementType> dtype;  // converts the input when set
  bool in_place = false;
  std::optional<double> scale;  // default 1/sqrt(size)
};

int cmd_transform(const TransformConfig& config, std::ostream& err);

struct SimulateConfig {
  std::uint32_t size = 256;
  std::uint32_t warps_per_block = 1;
  std::uint32_t num_chunks = 1;
  std::size_t rows = 1;
  std::uint64_t seed = 0;
  ElementType dtype = ElementType::kF64;
};

int cmd_simulate(const SimulateConfig& config, std::ostream& out,
                 std::ostream& err);

struct QuantConfig {
  OutlierSpec spec;
  QuantTarget target = QuantTarget::kINT4;
  Granularity granularity = Granularity::kPerTensor;
  std::size_t trials = 100;
};

int cmd_quant(const QuantConfig& config, std::ostream& out, std::ostream& err);

// CSV helpers, exposed for golden tests.
std::string bench_csv_header();
std::string simulate_csv_header();
std::string quant_csv_header();
std::string format_cost_row(const SimulateConfig& config,
                            const CostReport& cost, const CostReport& baseline,
                            bool equivalent);
void write_experiment_csv(const QuantConfig& config,
                          const ExperimentReport& report, std::ostream& out);
std::string experiment_summary(const QuantConfig& config,
                               const ExperimentReport& report);

}  // namespace hdt::cli

#endif  // HDT_TOOLS_COMMANDS_HPP_
