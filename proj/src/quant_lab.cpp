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

#include "hdt/quant_lab.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <numeric>
#include <random>
#include <string>

#include "hdt/blocked.hpp"
#include "hdt/float_formats.hpp"

namespace hdt {
namespace {

std::string lowercase(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return out;
}

double mse(const Matrix& a, const Matrix& b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double e = a.data()[i] - b.data()[i];
    acc += e * e;
  }
  return a.size() == 0 ? 0.0 : acc / static_cast<double>(a.size());
}

double max_abs(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::fabs(x));
  return m;
}

std::uint64_t trial_seed(std::uint64_t seed, std::uint64_t trial) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed),
                    static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(trial),
                    static_cast<std::uint32_t>(trial >> 32)};
  std::array<std::uint32_t, 2> out{};
  seq.generate(out.begin(), out.end());
  return (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
}

Matrix rotate(const Matrix& x) {
  const TransformSize size = parse_transform_size(x.cols());
  return hadamard_transform(x, size, TransformOptions::normalized(size));
}

}  // namespace

void validate(const OutlierSpec& spec) {
  auto bad = [](const std::string& why) {
    throw Error(ErrorCode::kBadSpec, why);
  };
  if (spec.rows == 0 || spec.cols == 0) bad("rows and cols must be positive");
  if (!(spec.base_std > 0.0) || !std::isfinite(spec.base_std)) {
    bad("base_std must be finite and positive");
  }
  if (!(spec.outlier_rate >= 0.0 && spec.outlier_rate <= 1.0)) {
    bad("outlier_rate must lie in [0, 1]");
  }
  if (!(spec.outlier_scale >= 1.0) || !std::isfinite(spec.outlier_scale)) {
    bad("outlier_scale must be finite and >= 1");
  }
}

Matrix gen_outlier_matrix(const OutlierSpec& spec) {
  validate(spec);
  const std::size_t n = spec.rows * spec.cols;
  std::mt19937_64 rng(spec.seed);
  std::normal_distribution<double> normal(0.0, spec.base_std);
  std::vector<double> values(n);
  for (double& v : values) v = normal(rng);

  const auto outliers = static_cast<std::size_t>(
      std::llround(spec.outlier_rate * static_cast<double>(n)));
  std::vector<std::size_t> index(n);
  std::iota(index.begin(), index.end(), std::size_t{0});
  std::bernoulli_distribution coin(0.5);
  const double magnitude = spec.outlier_scale * spec.base_std;
  // Partial Fisher-Yates picks distinct positions.
  for (std::size_t i = 0; i < std::min(outliers, n); ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, n - 1);
    std::swap(index[i], index[pick(rng)]);
    values[index[i]] = coin(rng) ? magnitude : -magnitude;
  }
  return Matrix(spec.rows, spec.cols, ElementType::kF64, std::move(values));
}

std::string_view quant_target_name(QuantTarget t) {
  switch (t) {
    case QuantTarget::kFP8E4M3:
      return "FP8E4M3";
    case QuantTarget::kINT8:
      return "INT8";
    case QuantTarget::kINT4:
      return "INT4";
  }
  return "unknown";
}

std::string_view granularity_name(Granularity g) {
  return g == Granularity::kPerTensor ? "per_tensor" : "per_row";
}

QuantTarget parse_quant_target(std::string_view name) {
  const std::string s = lowercase(name);
  if (s == "fp8e4m3" || s == "fp8") return QuantTarget::kFP8E4M3;
  if (s == "int8") return QuantTarget::kINT8;
  if (s == "int4") return QuantTarget::kINT4;
  throw Error(ErrorCode::kConfigError, "unknown quantization target '" + s + "'");
}

Granularity parse_granularity(std::string_view name) {
  const std::string s = lowercase(name);
  if (s == "per_tensor" || s == "tensor") return Granularity::kPerTensor;
  if (s == "per_row" || s == "row") return Granularity::kPerRow;
  throw Error(ErrorCode::kConfigError, "unknown granularity '" + s + "'");
}

double quant_max(QuantTarget t) {
  switch (t) {
    case QuantTarget::kFP8E4M3:
      return 448.0;
    case QuantTarget::kINT8:
      return 127.0;
    case QuantTarget::kINT4:
      return 7.0;
  }
  return 1.0;
}

QuantizedTensor quantize(const Matrix& x, QuantTarget target,
                         Granularity granularity) {
  for (double v : x.data()) {
    if (!std::isfinite(v)) {
      throw Error(ErrorCode::kBadSpec, "cannot quantize non-finite values");
    }
  }
  QuantizedTensor q;
  q.target = target;
  q.granularity = granularity;
  q.rows = x.rows();
  q.cols = x.cols();
  q.codes.resize(x.size());

  const std::size_t groups =
      granularity == Granularity::kPerTensor ? 1 : x.rows();
  const std::size_t group_len =
      granularity == Granularity::kPerTensor ? x.size() : x.cols();
  const double qmax = quant_max(target);
  for (std::size_t g = 0; g < groups; ++g) {
    const auto values = x.data().subspan(g * group_len, group_len);
    const double amax = max_abs(values);
    const double scale = amax > 0.0 ? amax / qmax : 1.0;
    q.scales.push_back(scale);
    for (std::size_t i = 0; i < group_len; ++i) {
      const double v = values[i] / scale;
      std::uint8_t code = 0;
      if (target == QuantTarget::kFP8E4M3) {
        code = encode_fp8e4m3(v);
      } else {
        const double r = std::clamp(std::nearbyint(v), -qmax, qmax);
        code = static_cast<std::uint8_t>(static_cast<std::int8_t>(r));
      }
      q.codes[g * group_len + i] = code;
    }
  }
  return q;
}

Matrix dequantize(const QuantizedTensor& q) {
  Matrix out(q.rows, q.cols, ElementType::kF64);
  const std::size_t group_len =
      q.granularity == Granularity::kPerTensor ? q.rows * q.cols : q.cols;
  for (std::size_t i = 0; i < q.codes.size(); ++i) {
    const double scale = q.scales[group_len == 0 ? 0 : i / group_len];
    const double v = q.target == QuantTarget::kFP8E4M3
                         ? decode_fp8e4m3(q.codes[i])
                         : static_cast<double>(static_cast<std::int8_t>(q.codes[i]));
    out.data()[i] = v * scale;
  }
  return out;
}

TrialResult run_trial(const Matrix& x, QuantTarget target,
                      Granularity granularity) {
  TrialResult r;
  const Matrix plain = dequantize(quantize(x, target, granularity));
  r.mse_plain = mse(plain, x);
  r.max_abs_plain = max_abs(x.data());

  const Matrix rotated = rotate(x);
  r.max_abs_rotated = max_abs(rotated.data());
  const Matrix restored =
      rotate(dequantize(quantize(rotated, target, granularity)));
  r.mse_rotated = mse(restored, x);
  return r;
}

ExperimentReport run_experiment(const OutlierSpec& spec, QuantTarget target,
                                Granularity granularity, std::size_t trials) {
  validate(spec);
  parse_transform_size(spec.cols);
  if (trials == 0) {
    throw Error(ErrorCode::kConfigError, "trials must be at least 1");
  }
  ExperimentReport report;
  std::size_t wins = 0;
  for (std::size_t t = 0; t < trials; ++t) {
    OutlierSpec trial_spec = spec;
    trial_spec.seed = trial_seed(spec.seed, t);
    const TrialResult r =
        run_trial(gen_outlier_matrix(trial_spec), target, granularity);
    report.trials.push_back(r);
    report.mse_plain += r.mse_plain;
    report.mse_rotated += r.mse_rotated;
    report.max_abs_plain = std::max(report.max_abs_plain, r.max_abs_plain);
    report.max_abs_rotated = std::max(report.max_abs_rotated, r.max_abs_rotated);
    if (r.mse_rotated < r.mse_plain) ++wins;
  }
  const auto n = static_cast<double>(trials);
  report.mse_plain /= n;
  report.mse_rotated /= n;
  report.win_rate = static_cast<double>(wins) / n;
  return report;
}

}  // namespace hdt
