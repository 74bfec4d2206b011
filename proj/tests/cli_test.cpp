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

#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "hdt/tensor_io.hpp"
#include "test_util.hpp"

namespace hdt::cli {
namespace {

namespace fs = std::filesystem;

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string golden(const std::string& name) {
  const fs::path p = fs::path(HDT_GOLDEN_DIR) / name;
  EXPECT_TRUE(fs::exists(p)) << p;
  return read_file(p);
}

std::string first_lines(const std::string& s, int n) {
  std::size_t pos = 0;
  for (int i = 0; i < n && pos != std::string::npos; ++i) {
    pos = s.find('\n', pos);
    if (pos != std::string::npos) ++pos;
  }
  return s.substr(0, pos);
}

fs::path temp_path(const std::string& name) {
  return fs::temp_directory_path() / ("hdt_cli_test_" + name);
}

TEST(CliGoldenTest, SimulateCsv) {
  SimulateConfig c;
  c.size = 4096;
  c.warps_per_block = 4;
  c.num_chunks = 4;
  c.rows = 2;
  std::ostringstream out;
  std::ostringstream err;
  ASSERT_EQ(cmd_simulate(c, out, err), kExitOk) << err.str();
  EXPECT_EQ(out.str(), golden("simulate_4096_w4_n4.csv"));

  c.size = 256;
  c.warps_per_block = 1;
  c.num_chunks = 1;
  c.rows = 1;
  c.dtype = ElementType::kBF16;
  std::ostringstream out256;
  ASSERT_EQ(cmd_simulate(c, out256, err), kExitOk);
  EXPECT_EQ(out256.str(), golden("simulate_256_bf16.csv"));
}

TEST(CliGoldenTest, QuantCsv) {
  QuantConfig c;
  c.spec.rows = 8;
  c.spec.cols = 256;
  c.trials = 4;
  std::ostringstream out;
  std::ostringstream err;
  ASSERT_EQ(cmd_quant(c, out, err), kExitOk) << err.str();
  EXPECT_EQ(out.str(), golden("quant_int4_small.csv"));
  EXPECT_NE(err.str().find("wins"), std::string::npos);
}

TEST(CliGoldenTest, BenchSchema) {
  BenchConfig c;
  c.sizes = {256, 1024};
  c.element_counts = {1u << 12};
  c.dtypes = {ElementType::kF32, ElementType::kF64};
  c.impls = {"scalar", "blocked", "dense_oracle"};
  c.repetitions = 3;
  c.warmup = 0;
  c.workers = 1;
  std::ostringstream out;
  const std::vector<BenchRow> rows = run_bench(c, &out);
  EXPECT_EQ(rows.size(), 12u);
  EXPECT_EQ(first_lines(out.str(), 2), golden("bench_header.csv"));
  for (const BenchRow& r : rows) {
    EXPECT_LE(r.p10_ns, r.median_ns);
    EXPECT_LE(r.median_ns, r.p90_ns);
    if (r.impl == "blocked") {
      EXPECT_EQ(r.mac_count, expected_mac_count(parse_transform_size(r.size),
                                                r.element_count / r.size));
    }
  }
}

TEST(CliGoldenTest, VerifySchema) {
  VerifyConfig c;
  c.max_size = 64;
  std::ostringstream out;
  ASSERT_EQ(cmd_verify(c, out), kExitOk) << out.str();
  EXPECT_EQ(first_lines(out.str(), 2), golden("verify_header.csv"));
  EXPECT_NE(out.str().find("# result: PASS"), std::string::npos);
}

TEST(CliVerifyTest, HealthyBuildPasses) {
  std::ostringstream out;
  EXPECT_EQ(cmd_verify(VerifyConfig{}, out), kExitOk) << out.str();
  EXPECT_EQ(out.str().find(",FAIL"), std::string::npos);
}

TEST(CliVerifyTest, InjectedFaultFails) {
  const EngineFn faulty = [](Matrix& x, const TransformSize& size,
                             const TransformOptions& opts) {
    hadamard_transform_inplace(x, size, opts);
    if (size.d == 2048 && x.rows() > 0) x(0, 5) += 1e-6;
  };
  std::ostringstream out;
  EXPECT_EQ(cmd_verify(VerifyConfig{}, out, faulty), kExitCheckFailed);
  EXPECT_NE(out.str().find("2048,blocked_vs_oracle_f64"), std::string::npos);
  EXPECT_NE(out.str().find(",FAIL"), std::string::npos);
  EXPECT_NE(out.str().find("# result: FAIL"), std::string::npos);
}

TEST(CliBenchTest, RejectsBadConfig) {
  BenchConfig c;
  c.sizes = {1024};
  c.element_counts = {1000};
  EXPECT_THROW(validate(c), Error);
  c.element_counts = {4096};
  c.impls = {"fast"};
  EXPECT_THROW(validate(c), Error);
  c.impls = {"blocked"};
  c.dtypes = {ElementType::kFP8E4M3};
  EXPECT_THROW(validate(c), Error);
  std::ostringstream out;
  std::ostringstream err;
  EXPECT_EQ(cmd_bench(c, out, err), kExitUsage);
}

TEST(CliTransformTest, RoundTripThroughFiles) {
  const fs::path in = temp_path("in.hdt");
  const fs::path mid = temp_path("mid.hdt");
  const fs::path back = temp_path("back.hdt");
  const Matrix x = random_matrix(5, 512, ElementType::kF64, 11);
  save_matrix(x, in);

  std::ostringstream err;
  TransformConfig c;
  c.input = in.string();
  c.output = mid.string();
  c.size = 512;
  ASSERT_EQ(cmd_transform(c, err), kExitOk) << err.str();
  c.input = mid.string();
  c.output = back.string();
  ASSERT_EQ(cmd_transform(c, err), kExitOk) << err.str();
  EXPECT_LE(testing::max_abs_diff(load_matrix(back).data(), x.data()), 1e-12);

  // In place, twice, lands back on the input too.
  c.input = in.string();
  c.output.clear();
  c.in_place = true;
  ASSERT_EQ(cmd_transform(c, err), kExitOk);
  const Matrix once = load_matrix(in);
  EXPECT_TRUE(testing::bitwise_equal(once, load_matrix(mid)));
  ASSERT_EQ(cmd_transform(c, err), kExitOk);
  EXPECT_LE(testing::max_abs_diff(load_matrix(in).data(), x.data()), 1e-12);

  for (const auto& p : {in, mid, back}) fs::remove(p);
}

TEST(CliTransformTest, ConvertsDtype) {
  const fs::path in = temp_path("conv_in.hdt");
  const fs::path out = temp_path("conv_out.hdt");
  save_matrix(random_matrix(2, 64, ElementType::kF64, 1), in);
  TransformConfig c;
  c.input = in.string();
  c.output = out.string();
  c.size = 64;
  c.dtype = ElementType::kBF16;
  std::ostringstream err;
  ASSERT_EQ(cmd_transform(c, err), kExitOk) << err.str();
  EXPECT_EQ(load_matrix(out).dtype(), ElementType::kBF16);
  fs::remove(in);
  fs::remove(out);
}

TEST(CliTransformTest, Errors) {
  const fs::path in = temp_path("err_in.hdt");
  save_matrix(Matrix(2, 64, ElementType::kF32), in);
  TransformConfig c;
  c.input = in.string();
  c.output = temp_path("err_out.hdt").string();
  c.size = 128;
  std::ostringstream err;
  EXPECT_EQ(cmd_transform(c, err), kExitUsage);
  EXPECT_NE(err.str().find("DimensionMismatch"), std::string::npos);

  c.size = 64;
  c.output = c.input;
  EXPECT_EQ(cmd_transform(c, err), kExitUsage);

  c.input = temp_path("missing.hdt").string();
  c.output = temp_path("err_out.hdt").string();
  EXPECT_EQ(cmd_transform(c, err), kExitUsage);
  fs::remove(in);
}

TEST(CliSimulateTest, ConstraintViolation) {
  SimulateConfig c;
  c.size = 1024;
  c.warps_per_block = 3;
  std::ostringstream out;
  std::ostringstream err;
  EXPECT_EQ(cmd_simulate(c, out, err), kExitUsage);
  EXPECT_NE(err.str().find("256 * 3 * 1 = 768 != 1024"), std::string::npos);
}

TEST(CliBinaryTest, ExitCodes) {
  const std::string exe = HDT_CLI_PATH;
  EXPECT_EQ(std::system((exe + " verify --max-size 256 > /dev/null").c_str()), 0);
  EXPECT_NE(std::system((exe + " simulate --size 1024 --wpb 3 > /dev/null 2>&1").c_str()),
            0);
  EXPECT_NE(std::system((exe + " > /dev/null 2>&1").c_str()), 0);
}

}  // namespace
}  // namespace hdt::cli
