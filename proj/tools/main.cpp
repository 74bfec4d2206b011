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

#include <CLI11.hpp>

#include <iostream>
#include <string>
#include <vector>

#include "commands.hpp"

namespace {

std::vector<hdt::ElementType> parse_dtypes(const std::vector<std::string>& names) {
  std::vector<hdt::ElementType> out;
  for (const std::string& n : names) out.push_back(hdt::parse_element_type(n));
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  using namespace hdt::cli;
  CLI::App app{"Blocked 16x16 fast Walsh-Hadamard transform toolkit"};
  app.require_subcommand(1);

  VerifyConfig verify;
  auto* verify_cmd =
      app.add_subcommand("verify", "Check every fast path against the oracle");
  verify_cmd->add_option("--max-size", verify.max_size, "Largest size checked")
      ->capture_default_str();
  verify_cmd->add_option("--seed", verify.seed)->capture_default_str();
  verify_cmd->add_option("--rows", verify.rows)->capture_default_str();

  BenchConfig bench;
  bench.sizes = {256, 512, 1024, 2048, 4096, 8192, 16384, 32768};
  bench.element_counts = {1u << 20, 1u << 23};
  std::vector<std::string> bench_dtypes{"f32"};
  auto* bench_cmd = app.add_subcommand("bench", "Time the implementations");
  bench_cmd->add_option("--sizes", bench.sizes)->delimiter(',')->capture_default_str();
  bench_cmd->add_option("--element-counts", bench.element_counts)
      ->delimiter(',')
      ->capture_default_str();
  bench_cmd->add_option("--dtypes", bench_dtypes)->delimiter(',')->capture_default_str();
  bench_cmd->add_option("--impls", bench.impls, "scalar,blocked,dense_oracle")
      ->delimiter(',')
      ->capture_default_str();
  bench_cmd->add_option("--repetitions", bench.repetitions)->capture_default_str();
  bench_cmd->add_option("--warmup", bench.warmup)->capture_default_str();
  bench_cmd->add_option("--seed", bench.seed)->capture_default_str();
  bench_cmd->add_option("--workers", bench.workers, "0 = all cores")
      ->capture_default_str();

  TransformConfig transform;
  std::string transform_dtype;
  double transform_scale = 0.0;
  auto* transform_cmd =
      app.add_subcommand("transform", "Transform the rows of an HDT1 file");
  transform_cmd->add_option("--input,-i", transform.input)->required();
  transform_cmd->add_option("--output,-o", transform.output,
                            "Defaults to the input path with --in-place");
  transform_cmd->add_option("--size", transform.size)->required();
  transform_cmd->add_option("--dtype", transform_dtype, "Convert before transforming");
  transform_cmd->add_flag("--in-place", transform.in_place);
  auto* scale_opt = transform_cmd->add_option("--scale", transform_scale,
                                              "Default 1/sqrt(size)");

  SimulateConfig simulate;
  std::string simulate_dtype = "f64";
  auto* simulate_cmd =
      app.add_subcommand("simulate", "Run the warp/chunk schedule model");
  simulate_cmd->add_option("--size", simulate.size)->required();
  simulate_cmd->add_option("--wpb,--warps-per-block", simulate.warps_per_block)
      ->capture_default_str();
  simulate_cmd->add_option("--nc,--num-chunks", simulate.num_chunks)
      ->capture_default_str();
  simulate_cmd->add_option("--rows", simulate.rows)->capture_default_str();
  simulate_cmd->add_option("--seed", simulate.seed)->capture_default_str();
  simulate_cmd->add_option("--dtype", simulate_dtype)->capture_default_str();

  QuantConfig quant;
  std::string quant_target = "int4";
  std::string quant_granularity = "per_tensor";
  auto* quant_cmd =
      app.add_subcommand("quant", "Quantization error with and without rotation");
  quant_cmd->add_option("--rows", quant.spec.rows)->capture_default_str();
  quant_cmd->add_option("--cols", quant.spec.cols)->capture_default_str();
  quant_cmd->add_option("--base-std", quant.spec.base_std)->capture_default_str();
  quant_cmd->add_option("--outlier-rate", quant.spec.outlier_rate)
      ->capture_default_str();
  quant_cmd->add_option("--outlier-scale", quant.spec.outlier_scale)
      ->capture_default_str();
  quant_cmd->add_option("--seed", quant.spec.seed)->capture_default_str();
  quant_cmd->add_option("--target", quant_target, "fp8e4m3 | int8 | int4")
      ->capture_default_str();
  quant_cmd->add_option("--granularity", quant_granularity, "per_tensor | per_row")
      ->capture_default_str();
  quant_cmd->add_option("--trials", quant.trials)->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*verify_cmd) return cmd_verify(verify, std::cout);
    if (*bench_cmd) {
      bench.dtypes = parse_dtypes(bench_dtypes);
      return cmd_bench(bench, std::cout, std::cerr);
    }
    if (*transform_cmd) {
      if (!transform_dtype.empty()) {
        transform.dtype = hdt::parse_element_type(transform_dtype);
      }
      if (*scale_opt) transform.scale = transform_scale;
      return cmd_transform(transform, std::cerr);
    }
    if (*simulate_cmd) {
      simulate.dtype = hdt::parse_element_type(simulate_dtype);
      return cmd_simulate(simulate, std::cout, std::cerr);
    }
    if (*quant_cmd) {
      quant.target = hdt::parse_quant_target(quant_target);
      quant.granularity = hdt::parse_granularity(quant_granularity);
      return cmd_quant(quant, std::cout, std::cerr);
    }
  } catch (const hdt::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
