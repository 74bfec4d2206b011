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

#ifndef HDT_SRC_KERNELS_HPP_
#define HDT_SRC_KERNELS_HPP_

// Building blocks shared by the blocked engine, the emulated-precision path
// and the schedule simulator. Any two callers that group elements into the
// same 16-lane tile rows produce bitwise identical results.

#include <algorithm>
#include <array>
#include <cstddef>
#include <exception>
#include <span>
#include <thread>
#include <type_traits>
#include <vector>

#include "hdt/blocked.hpp"
#include "hdt/core_types.hpp"
#include "hdt/float_formats.hpp"

namespace hdt::internal {

// Accumulation policies. mac() folds one product into an accumulator,
// finish() runs once per output at the end of a stage and scale() applies
// the final multiplier.
struct PlainF64 {
  using value_type = double;
  double mac(double acc, double a, double c) const { return acc + a * c; }
  double finish(double v) const { return v; }
  double scale(double v, double s) const { return v * s; }
};

struct PlainF32 {
  using value_type = float;
  float mac(float acc, float a, float c) const { return acc + a * c; }
  float finish(float v) const { return v; }
  float scale(float v, double s) const { return v * static_cast<float>(s); }
};

// Accumulates in the storage format: every MAC result is rounded.
struct NarrowAccumulate {
  using value_type = double;
  ElementType dtype;
  double mac(double acc, double a, double c) const {
    return round_to(acc + a * c, dtype);
  }
  double finish(double v) const { return v; }
  double scale(double v, double s) const { return round_to(v * s, dtype); }
};

// Accumulates in binary32 and converts to the storage format once per
// stage output.
struct WideThenConvert {
  using value_type = float;
  ElementType dtype;
  float mac(float acc, float a, float c) const { return acc + a * c; }
  float finish(float v) const {
    return static_cast<float>(round_to(static_cast<double>(v), dtype));
  }
  float scale(float v, double s) const {
    return static_cast<float>(round_to(static_cast<double>(v) * s, dtype));
  }
};

template <typename T>
struct Coefficients {
  Tile16<T> full;
  std::array<Tile16<T>, 4> diagonal;  // index = residual exponent

  Coefficients() {
    full = cast(full_tile());
    for (std::uint32_t a = 1; a <= 3; ++a) diagonal[a] = cast(build_last_tile(a));
  }

  const Tile16<T>& for_stage(const Stage& s) const {
    return s.tile == TileKind::kFullH16 ? full : diagonal[s.residual_exponent];
  }

 private:
  static Tile16<T> cast(const Tile16<double>& t) {
    Tile16<T> out;
    for (std::size_t i = 0; i < kTileElems; ++i) {
      out.values[i] = static_cast<T>(t.values[i]);
    }
    return out;
  }
};

template <typename P, typename T = typename P::value_type>
void multiply_tile_row(const T* in, T* out, const Tile16<T>& coeff,
                       const P& p) {
  std::array<T, kTileDim> acc{};
  for (std::size_t k = 0; k < kTileDim; ++k) {
    const T a = in[k];
    const T* c = &coeff.values[k * kTileDim];
    for (std::size_t j = 0; j < kTileDim; ++j) acc[j] = p.mac(acc[j], a, c[j]);
  }
  for (std::size_t j = 0; j < kTileDim; ++j) out[j] = p.finish(acc[j]);
}

// Multiplies every 16-lane row of `data` by `coeff`. A buffer shorter than
// one tile row is zero-padded; padded lanes are discarded.
template <typename P, typename T = typename P::value_type>
void apply_tile(std::span<T> data, const Tile16<T>& coeff, const P& p,
                EngineStats* stats) {
  if (data.size() < kTileDim) {
    std::array<T, kTileDim> padded{};
    std::copy(data.begin(), data.end(), padded.begin());
    multiply_tile_row(padded.data(), padded.data(), coeff, p);
    std::copy_n(padded.begin(), data.size(), data.begin());
    if (stats != nullptr) {
      stats->mac_count += kTileDim * data.size();
      stats->tile_rows += 1;
    }
    return;
  }
  for (std::size_t off = 0; off < data.size(); off += kTileDim) {
    multiply_tile_row(data.data() + off, data.data() + off, coeff, p);
  }
  if (stats != nullptr) {
    stats->mac_count += kTileDim * data.size();
    stats->tile_rows += data.size() / kTileDim;
  }
}

// dst (cols x rows) = transpose of src (rows x cols).
template <typename T>
void transpose(const T* src, T* dst, std::size_t rows, std::size_t cols) {
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) dst[c * rows + r] = src[r * cols + c];
  }
}

// For each block of `block` elements viewed as (block/16) x 16: transpose,
// multiply, transpose back.
template <typename P, typename T = typename P::value_type>
void apply_within(std::span<T> data, std::size_t block, const Tile16<T>& coeff,
                  const P& p, std::vector<T>& scratch, EngineStats* stats) {
  const std::size_t groups = block / kTileDim;
  scratch.resize(std::max(scratch.size(), block));
  for (std::size_t off = 0; off < data.size(); off += block) {
    T* blk = data.data() + off;
    transpose(blk, scratch.data(), groups, kTileDim);
    apply_tile(std::span<T>(scratch.data(), block), coeff, p, stats);
    transpose(scratch.data(), blk, kTileDim, groups);
  }
}

// Runs stages on `data` with kTransposeWithin256 acting on blocks of
// `within_block` elements. A kTransposeAcross256 stage only multiplies; the
// caller has already moved the data into the transposed layout.
template <typename P, typename T = typename P::value_type>
void run_stages(std::span<T> data, std::span<const Stage> stages,
                std::size_t within_block, const Coefficients<T>& coeffs,
                const P& p, std::vector<T>& scratch, EngineStats* stats) {
  for (const Stage& s : stages) {
    const Tile16<T>& coeff = coeffs.for_stage(s);
    if (s.exchange == Exchange::kTransposeWithin256) {
      apply_within(data, within_block, coeff, p, scratch, stats);
    } else {
      apply_tile(data, coeff, p, stats);
    }
  }
}

inline std::size_t across_stage_index(const ExecutionPlan& plan) {
  for (std::size_t i = 0; i < plan.stages.size(); ++i) {
    if (plan.stages[i].exchange == Exchange::kTransposeAcross256) return i;
  }
  return plan.stages.size();
}

// One row through the whole plan, including the final scale.
template <typename P, typename T = typename P::value_type>
void run_row(std::span<T> row, const ExecutionPlan& plan,
             const Coefficients<T>& coeffs, const P& p, double scale,
             std::vector<T>& scratch, EngineStats* stats) {
  const std::size_t d = plan.size.d;
  const std::span<const Stage> stages(plan.stages);
  const std::size_t split = across_stage_index(plan);
  if (split == stages.size()) {
    run_stages(row, stages, d, coeffs, p, scratch, stats);
  } else {
    const std::size_t columns_len = d / kChunkElems;
    run_stages(row, stages.first(split), kChunkElems, coeffs, p, scratch,
               stats);
    scratch.resize(std::max(scratch.size(), d));
    transpose(row.data(), scratch.data(), columns_len, kChunkElems);
    std::copy_n(scratch.data(), d, row.data());
    run_stages(row, stages.subspan(split), columns_len, coeffs, p, scratch,
               stats);
    transpose(row.data(), scratch.data(), kChunkElems, columns_len);
    std::copy_n(scratch.data(), d, row.data());
  }
  for (T& v : row) v = p.scale(v, scale);
}

inline unsigned resolve_workers(unsigned requested, std::size_t rows) {
  unsigned w = requested == 0 ? std::thread::hardware_concurrency() : requested;
  w = std::max(1u, w);
  return static_cast<unsigned>(std::min<std::size_t>(w, std::max<std::size_t>(rows, 1)));
}

// Rows are split into contiguous blocks, one per worker.
template <typename P, typename T = typename P::value_type>
void transform_rows(std::span<T> data, std::size_t rows,
                    const TransformSize& size, double scale, const P& p,
                    unsigned workers, EngineStats* stats) {
  if (data.size() != rows * size.d) {
    throw Error(ErrorCode::kDimensionMismatch,
                "buffer does not hold rows * d elements");
  }
  if (rows == 0) return;
  const ExecutionPlan pl = plan(size);
  const Coefficients<T> coeffs;
  const unsigned n_workers = resolve_workers(workers, rows);
  std::vector<EngineStats> worker_stats(n_workers);

  std::vector<std::exception_ptr> failures(n_workers);

  auto work = [&](unsigned w) {
    try {
      const std::size_t r0 = rows * w / n_workers;
      const std::size_t r1 = rows * (w + 1) / n_workers;
      std::vector<T> scratch(size.d);
      EngineStats* st = stats != nullptr ? &worker_stats[w] : nullptr;
      for (std::size_t r = r0; r < r1; ++r) {
        run_row(data.subspan(r * size.d, size.d), pl, coeffs, p, scale,
                scratch, st);
      }
    } catch (...) {
      failures[w] = std::current_exception();
    }
  };

  if (n_workers == 1) {
    work(0);
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(n_workers);
    for (unsigned w = 0; w < n_workers; ++w) pool.emplace_back(work, w);
  }
  for (const auto& f : failures) {
    if (f) std::rethrow_exception(f);
  }
  if (stats != nullptr) {
    for (const EngineStats& s : worker_stats) {
      stats->mac_count += s.mac_count;
      stats->tile_rows += s.tile_rows;
    }
  }
}

// Runs a policy over a Matrix, staging through a T buffer when T is not
// double.
template <typename P>
void transform_matrix(Matrix& x, const TransformSize& size, double scale,
                      const P& p, unsigned workers, EngineStats* stats) {
  using T = typename P::value_type;
  if constexpr (std::is_same_v<T, double>) {
    transform_rows(x.data(), x.rows(), size, scale, p, workers, stats);
  } else {
    std::vector<T> buf(x.data().begin(), x.data().end());
    transform_rows(std::span<T>(buf), x.rows(), size, scale, p, workers, stats);
    std::copy(buf.begin(), buf.end(), x.data().begin());
  }
}

}  // namespace hdt::internal

#endif  // HDT_SRC_KERNELS_HPP_
