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

#ifndef HDT_QUANT_LAB_HPP_
#define HDT_QUANT_LAB_HPP_

#include <cstdint>
#include <string_view>
#include <vector>

#include "hdt/core_types.hpp"

namespace hdt {

// Synthetic activations: a Gaussian bulk with a fraction of entries
// replaced by +-outlier_scale * base_std.
struct OutlierSpec {
  std::size_t rows = 64;
  std::size_t cols = 1024;
  double base_std = 1.0;
  double outlier_rate = 0.001;
  double outlier_scale = 100.0;
  std::uint64_t seed = 1;
};

// Throws kBadSpec.
void validate(const OutlierSpec& spec);

// F64 matrix; exactly round(outlier_rate * rows * cols) outliers at
// distinct positions with random signs.
Matrix gen_outlier_matrix(const OutlierSpec& spec);

enum class QuantTarget { kFP8E4M3, kINT8, kINT4 };
enum class Granularity { kPerTensor, kPerRow };

std::string_view quant_target_name(QuantTarget t);
std::string_view granularity_name(Granularity g);
QuantTarget parse_quant_target(std::string_view name);
Granularity parse_granularity(std::string_view name);

// Largest code magnitude: 448, 127 or 7.
double quant_max(QuantTarget t);

struct QuantizedTensor {
  QuantTarget target = QuantTarget::kINT8;
  Granularity granularity = Granularity::kPerTensor;
  std::size_t rows = 0;
  std::size_t cols = 0;
  // Two's-complement integers for INT8/INT4, E4M3 bit patterns for FP8.
  std::vector<std::uint8_t> codes;
  // One scale per tensor or per row. An all-zero group gets scale 1.
  std::vector<double> scales;
};

// Symmetric: scale = max_abs / quant_max(target), codes = round(x / scale).
QuantizedTensor quantize(const Matrix& x, QuantTarget target,
                         Granularity granularity);
Matrix dequantize(const QuantizedTensor& q);

struct TrialResult {
  double mse_plain = 0.0;
  double mse_rotated = 0.0;
  double max_abs_plain = 0.0;
  double max_abs_rotated = 0.0;
};

struct ExperimentReport {
  std::vector<TrialResult> trials;
  double mse_plain = 0.0;     // mean over trials
  double mse_rotated = 0.0;   // mean over trials
  double win_rate = 0.0;      // fraction with mse_rotated < mse_plain
  double max_abs_plain = 0.0;    // max over trials
  double max_abs_rotated = 0.0;  // max over trials
};

// Error of quantize -> dequantize, directly and inside the normalized
// Hadamard basis (rotate, quantize, dequantize, rotate back), measured
// against the F64 original. Trial t uses seed (spec.seed, t).
TrialResult run_trial(const Matrix& x, QuantTarget target,
                      Granularity granularity);
ExperimentReport run_experiment(const OutlierSpec& spec, QuantTarget target,
                                Granularity granularity, std::size_t trials);

}  // namespace hdt

#endif  // HDT_QUANT_LAB_HPP_
