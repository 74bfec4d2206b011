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

#include "commands.hpp"

#include <fmt/format.h>
#include <fmt/ostream.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstring>
#include <filesystem>
#include <ostream>
#include <thread>

#include "hdt/float_formats.hpp"
#include "hdt/precision.hpp"
#include "hdt/reference.hpp"
#include "hdt/tensor_io.hpp"

namespace hdt::cli {
namespace {

double max_abs_diff(std::span<const double> a, std::span<const double> b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    m = std::max(m, std::fabs(a[i] - b[i]));
  }
  return m;
}

double max_abs(std::span<const double> a) {
  double m = 0.0;
  for (double v : a) m = std::max(m, std::fabs(v));
  return m;
}

double norm2(std::span<const double> a) {
  double s = 0.0;
  for (double v : a) s += v * v;
  return std::sqrt(s);
}

bool bitwise_equal(const Matrix& a, const Matrix& b) {
  return a.size() == b.size() &&
         std::memcmp(a.data().data(), b.data().data(),
                     a.size() * sizeof(double)) == 0;
}

class VerifyTable {
 public:
  explicit VerifyTable(std::ostream& out) : out_(out) {}

  void check(std::uint32_t size, std::string_view name, double error,
             double tolerance) {
    const bool ok = error <= tolerance;  // NaN fails
    ++total_;
    if (ok) ++passed_;
    fmt::print(out_, "{},{},{:.3e},{:.0e},{}\n", size, name, error, tolerance,
               ok ? "PASS" : "FAIL");
  }

  bool all_passed() const { return passed_ == total_; }
  int passed() const { return passed_; }
  int total() const { return total_; }

 private:
  std::ostream& out_;
  int passed_ = 0;
  int total_ = 0;
};

template <typename Fn>
std::vector<double> time_runs(unsigned warmup, unsigned reps, Fn&& fn) {
  for (unsigned i = 0; i < warmup; ++i) fn();
  std::vector<double> ns;
  for (unsigned i = 0; i < reps; ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    fn();
    const auto t1 = std::chrono::steady_clock::now();
    ns.push_back(std::chrono::duration<double, std::nano>(t1 - t0).count());
  }
  std::sort(ns.begin(), ns.end());
  return ns;
}

double percentile(const std::vector<double>& sorted, double q) {
  const auto idx = static_cast<std::size_t>(
      std::lround(q * static_cast<double>(sorted.size() - 1)));
  return sorted[idx];
}

unsigned resolved_workers(unsigned w) {
  return w == 0 ? std::max(1u, std::thread::hardware_concurrency()) : w;
}

}  // namespace

int cmd_verify(const VerifyConfig& config, std::ostream& out,
               const EngineFn& engine) {
  const EngineFn run = engine ? engine
                              : EngineFn([](Matrix& m, const TransformSize& s,
                                            const TransformOptions& o) {
                                  hadamard_transform_inplace(m, s, o);
                                });
  const TransformSize limit = parse_transform_size(config.max_size);
  fmt::print(out, "# hdt-verify v1 seed={} max_size={} rows={}\n", config.seed,
             limit.d, config.rows);
  fmt::print(out, "size,check,max_error,tolerance,status\n");
  VerifyTable table(out);

  // Size-independent building blocks.
  {
    Tile16<double> identity;
    for (std::size_t i = 0; i < kTileDim; ++i) identity(i, i) = 1.0;
    const Tile16<double> h = full_tile();
    const Tile16<double> prod = microkernel_16x16(identity, h);
    table.check(16, "microkernel_identity",
                max_abs_diff(prod.values, h.values), 0.0);
    for (std::uint32_t a = 1; a <= 3; ++a) {
      const Tile16<double> t = build_last_tile(a);
      Tile16<double> tt;
      for (std::size_t r = 0; r < kTileDim; ++r) {
        for (std::size_t c = 0; c < kTileDim; ++c) tt(r, c) = t(c, r);
      }
      const Tile16<double> gram = microkernel_16x16(t, tt);
      Tile16<double> expected;
      for (std::size_t i = 0; i < kTileDim; ++i) expected(i, i) = 1u << a;
      table.check(1u << a, "last_tile_gram",
                  max_abs_diff(gram.values, expected.values), 0.0);
    }
    table.check(0, "round_to_bf16",
                std::fabs(round_to(0.2, ElementType::kBF16) - 0.2001953125), 0.0);
    table.check(0, "round_to_f16",
                std::fabs(round_to(0.2, ElementType::kF16) - 0.199951171875),
                0.0);
  }

  for (std::uint32_t d = kMinTransformSize; d <= limit.d; d *= 2) {
    const TransformSize size = parse_transform_size(d);
    const double norm = 1.0 / std::sqrt(static_cast<double>(d));

    table.check(d, "plan_stages",
                std::fabs(static_cast<double>(plan(size).stages.size()) -
                          size.iterations()),
                0.0);
    if (d <= 256) {
      const DenseHadamard h = sylvester(d);
      double worst = 0.0;
      for (std::uint32_t i = 0; i < d; ++i) {
        for (std::uint32_t j = 0; j < d; ++j) {
          long dot = 0;
          for (std::uint32_t k = 0; k < d; ++k) dot += h(i, k) * h(j, k);
          worst = std::max(worst, std::fabs(static_cast<double>(
                                      dot - (i == j ? static_cast<long>(d) : 0))));
        }
      }
      table.check(d, "sylvester_orthogonal", worst, 0.0);
    }

    // F32-representable inputs serve both the F64 and F32 checks.
    const Matrix x32 = random_matrix(config.rows, d, ElementType::kF32,
                                     config.seed + d);
    const Matrix x(config.rows, d, ElementType::kF64,
                   std::vector<double>(x32.data().begin(), x32.data().end()));
    const Matrix oracle = dense_rotate(x, d, norm);
    const double oracle_max = std::max(max_abs(oracle.data()), 1e-300);

    Matrix fast = x;
    run(fast, size, TransformOptions::normalized(size));
    table.check(d, "blocked_vs_oracle_f64",
                max_abs_diff(fast.data(), oracle.data()), 1e-9);

    Matrix fast32 = x32;
    run(fast32, size, TransformOptions::normalized(size, ElementType::kF32));
    table.check(d, "blocked_vs_oracle_f32",
                max_abs_diff(fast32.data(), oracle.data()) / oracle_max, 1e-4);

    const Matrix scalar = fwht_scalar(x, norm);
    table.check(d, "scalar_vs_oracle",
                max_abs_diff(scalar.data(), oracle.data()) / max_abs(x.data()),
                1e-10);

    Matrix twice = fast;
    run(twice, size, TransformOptions::normalized(size));
    table.check(d, "involution",
                max_abs_diff(twice.data(), x.data()) / max_abs(x.data()), 1e-12);
    table.check(d, "norm_preservation",
                std::fabs(norm2(fast.data()) / norm2(x.data()) - 1.0), 1e-12);

    for (ElementType t : {ElementType::kF16, ElementType::kBF16}) {
      Matrix one_hot(1, d, t);
      one_hot(0, 0) = 1.0;
      TransformOptions opts;
      opts.dtype = t;
      const Matrix y =
          transform_emulated(one_hot, size, opts, default_accum_mode(t));
      double err = 0.0;
      for (double v : y.data()) err = std::max(err, std::fabs(v - 1.0));
      table.check(d, t == ElementType::kF16 ? "emulated_onehot_f16"
                                            : "emulated_onehot_bf16",
                  err, 0.0);
    }
  }
  fmt::print(out, "# result: {} ({}/{})\n",
             table.all_passed() ? "PASS" : "FAIL", table.passed(),
             table.total());
  return table.all_passed() ? kExitOk : kExitCheckFailed;
}

void validate(const BenchConfig& config) {
  auto bad = [](const std::string& why) {
    throw Error(ErrorCode::kConfigError, why);
  };
  if (config.repetitions < 1) bad("repetitions must be >= 1");
  if (config.sizes.empty() || config.element_counts.empty()) {
    bad("need at least one size and one element count");
  }
  for (std::uint32_t s : config.sizes) {
    parse_transform_size(s);
    for (std::uint64_t n : config.element_counts) {
      if (n == 0 || n % s != 0) {
        bad(fmt::format("element count {} is not divisible by size {}", n, s));
      }
    }
  }
  for (const std::string& impl : config.impls) {
    if (impl != "scalar" && impl != "blocked" && impl != "dense_oracle") {
      bad("unknown impl '" + impl + "'");
    }
  }
  for (ElementType t : config.dtypes) {
    if (t == ElementType::kFP8E4M3) bad("fp8e4m3 is not a transform dtype");
  }
}

std::string bench_csv_header() {
  return "impl,size,element_count,dtype,median_ns,p10_ns,p90_ns,mac_count";
}

std::vector<BenchRow> run_bench(const BenchConfig& config, std::ostream* out) {
  validate(config);
  const unsigned workers = resolved_workers(config.workers);
  if (out != nullptr) {
    fmt::print(*out,
               "# hdt-bench v1 seed={} workers={} warmup={} repetitions={}\n",
               config.seed, workers, config.warmup, config.repetitions);
    fmt::print(*out, "{}\n", bench_csv_header());
  }
  std::vector<BenchRow> rows;
  for (std::uint32_t d : config.sizes) {
    const TransformSize size = parse_transform_size(d);
    const double norm = 1.0 / std::sqrt(static_cast<double>(d));
    for (std::uint64_t count : config.element_counts) {
      const std::size_t m = count / d;
      for (ElementType t : config.dtypes) {
        const Matrix input = random_matrix(m, d, t, config.seed);
        for (const std::string& impl : config.impls) {
          BenchRow row{impl, d, count, t, 0, 0, 0, 0};
          std::vector<double> ns;
          if (impl == "blocked") {
            TransformOptions opts = TransformOptions::normalized(size, t);
            opts.workers = workers;
            Matrix work = input;
            ns = time_runs(config.warmup, config.repetitions,
                           [&] { hadamard_transform_inplace(work, size, opts); });
            row.mac_count = expected_mac_count(size, m);
          } else if (impl == "scalar") {
            Matrix work = input;
            ns = time_runs(config.warmup, config.repetitions,
                           [&] { fwht_scalar_inplace(work, norm); });
            row.mac_count = scalar_op_count(size, m);
          } else {
            ns = time_runs(config.warmup, config.repetitions,
                           [&] { (void)dense_rotate(input, d, norm); });
            row.mac_count = static_cast<std::uint64_t>(m) * d * d;
          }
          row.median_ns = percentile(ns, 0.5);
          row.p10_ns = percentile(ns, 0.1);
          row.p90_ns = percentile(ns, 0.9);
          if (out != nullptr) {
            fmt::print(*out, "{},{},{},{},{:.0f},{:.0f},{:.0f},{}\n", row.impl,
                       row.size, row.element_count, element_type_name(row.dtype),
                       row.median_ns, row.p10_ns, row.p90_ns, row.mac_count);
            out->flush();
          }
          rows.push_back(row);
        }
      }
    }
  }
  return rows;
}

int cmd_bench(const BenchConfig& config, std::ostream& out, std::ostream& err) {
  try {
    run_bench(config, &out);
  } catch (const Error& e) {
    fmt::print(err, "error: {}\n", e.what());
    return kExitUsage;
  }
  return kExitOk;
}

int cmd_transform(const TransformConfig& config, std::ostream& err) {
  try {
    const TransformSize size = parse_transform_size(config.size);
    Matrix m = load_matrix(config.input);
    if (config.dtype && *config.dtype != m.dtype()) {
      m = Matrix::from_values(m.rows(), m.cols(), *config.dtype, m.data());
    }
    TransformOptions opts = TransformOptions::normalized(size, m.dtype());
    opts.in_place = config.in_place;
    if (config.scale) opts.scale = *config.scale;
    if (opts.in_place) {
      hadamard_transform_inplace(m, size, opts);
      save_matrix(m, config.output.empty() ? config.input : config.output);
    } else {
      if (config.output.empty() ||
          std::filesystem::path(config.output) ==
              std::filesystem::path(config.input)) {
        throw Error(ErrorCode::kConfigError,
                    "out-of-place transform needs a distinct output path");
      }
      save_matrix(hadamard_transform(m, size, opts), config.output);
    }
  } catch (const Error& e) {
    fmt::print(err, "error: {}\n", e.what());
    return kExitUsage;
  }
  return kExitOk;
}

std::string simulate_csv_header() {
  return "size,wpb,nc,tile_matmul_count,mma_count,mac_count,barrier_count,"
         "smem_exchange_count,baseline_scalar_ops,baseline_barriers,"
         "equivalence";
}

std::string format_cost_row(const SimulateConfig& config,
                            const CostReport& cost, const CostReport& baseline,
                            bool equivalent) {
  return fmt::format("{},{},{},{},{},{},{},{},{},{},{}", config.size,
                     config.warps_per_block, config.num_chunks,
                     cost.tile_matmul_count, cost.mma_count, cost.mac_count,
                     cost.barrier_count, cost.smem_exchange_count,
                     baseline.scalar_op_count, baseline.barrier_count,
                     equivalent ? "PASS" : "FAIL");
}

int cmd_simulate(const SimulateConfig& config, std::ostream& out,
                 std::ostream& err) {
  try {
    const TransformSize size = parse_transform_size(config.size);
    const SchedulePlan sp =
        make_schedule(size, config.warps_per_block, config.num_chunks);
    const Matrix x = random_matrix(config.rows, size.d, config.dtype, config.seed);
    const double scale = 1.0 / std::sqrt(static_cast<double>(size.d));
    const SimulationResult sim = simulate(x, sp, scale);
    TransformOptions opts = TransformOptions::normalized(size, config.dtype);
    const Matrix reference = hadamard_transform(x, size, opts);
    const bool equivalent = bitwise_equal(sim.output, reference);
    fmt::print(out,
               "# hdt-simulate v1 rows={} seed={} dtype={} "
               "baseline_barriers=reconstructed\n",
               config.rows, config.seed, element_type_name(config.dtype));
    fmt::print(out, "{}\n", simulate_csv_header());
    fmt::print(out, "{}\n",
               format_cost_row(config, sim.cost,
                               baseline_cost(size, config.rows), equivalent));
    return equivalent ? kExitOk : kExitCheckFailed;
  } catch (const Error& e) {
    fmt::print(err, "error: {}\n", e.what());
    return kExitUsage;
  }
}

std::string quant_csv_header() {
  return "trial,mse_plain,mse_rotated,max_abs_plain,max_abs_rotated,win_rate";
}

void write_experiment_csv(const QuantConfig& config,
                          const ExperimentReport& report, std::ostream& out) {
  const OutlierSpec& s = config.spec;
  fmt::print(out,
             "# hdt-quant v1 target={} granularity={} rows={} cols={} "
             "base_std={} outlier_rate={} outlier_scale={} seed={} trials={}\n",
             quant_target_name(config.target),
             granularity_name(config.granularity), s.rows, s.cols, s.base_std,
             s.outlier_rate, s.outlier_scale, s.seed, config.trials);
  fmt::print(out, "{}\n", quant_csv_header());
  for (std::size_t t = 0; t < report.trials.size(); ++t) {
    const TrialResult& r = report.trials[t];
    fmt::print(out, "{},{:.9g},{:.9g},{:.9g},{:.9g},{}\n", t, r.mse_plain,
               r.mse_rotated, r.max_abs_plain, r.max_abs_rotated,
               r.mse_rotated < r.mse_plain ? 1 : 0);
  }
  fmt::print(out, "aggregate,{:.9g},{:.9g},{:.9g},{:.9g},{:.9g}\n",
             report.mse_plain, report.mse_rotated, report.max_abs_plain,
             report.max_abs_rotated, report.win_rate);
}

std::string experiment_summary(const QuantConfig& config,
                               const ExperimentReport& report) {
  return fmt::format(
      "{} {} over {} trials: mean MSE {:.4g} plain vs {:.4g} rotated "
      "({:.1f}x), rotation wins {:.0f}% of trials; max |x| {:.4g} -> {:.4g}\n",
      quant_target_name(config.target), granularity_name(config.granularity),
      report.trials.size(), report.mse_plain, report.mse_rotated,
      report.mse_rotated > 0 ? report.mse_plain / report.mse_rotated : 0.0,
      100.0 * report.win_rate, report.max_abs_plain, report.max_abs_rotated);
}

int cmd_quant(const QuantConfig& config, std::ostream& out, std::ostream& err) {
  try {
    const ExperimentReport report = run_experiment(
        config.spec, config.target, config.granularity, config.trials);
    write_experiment_csv(config, report, out);
    fmt::print(err, "{}", experiment_summary(config, report));
  } catch (const Error& e) {
    fmt::print(err, "error: {}\n", e.what());
    return kExitUsage;
  }
  return kExitOk;
}

}  // namespace hdt::cli
