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

#ifndef HDT_REFERENCE_HPP_
#define HDT_REFERENCE_HPP_

#include <bit>
#include <cstdint>
#include <vector>

#include "hdt/core_types.hpp"

namespace hdt {

// Unnormalized Sylvester-Hadamard matrix; entries are +1 / -1 with
// H[i][j] = (-1)^popcount(i & j). Multiply by normalization() for the
// orthogonal version.
class DenseHadamard {
 public:
  // entries must hold d*d values in {+1, -1}, row-major.
  DenseHadamard(TransformSize size, std::vector<std::int8_t> entries);

  std::uint32_t d() const noexcept { return size_.d; }
  const TransformSize& size() const noexcept { return size_; }
  int operator()(std::uint32_t i, std::uint32_t j) const {
    return entries_[static_cast<std::size_t>(i) * size_.d + j];
  }
  double normalization() const noexcept;
  const std::vector<std::int8_t>& entries() const noexcept { return entries_; }

 private:
  TransformSize size_;
  std::vector<std::int8_t> entries_;
};

// Built by the recursion H(2k) = [[H(k), H(k)], [H(k), -H(k)]].
DenseHadamard sylvester(std::uint64_t d);

// Sign rule evaluated directly: (-1)^popcount(i & j).
inline int hadamard_sign(std::uint32_t i, std::uint32_t j) {
  return (std::popcount(i & j) & 1) ? -1 : 1;
}

// out[i, :] = scale * H_d * x[i, :] computed in F64 by plain matrix
// multiplication. H is materialized for d <= 4096 and generated on the fly
// above. The result has dtype F64.
Matrix dense_rotate(const Matrix& x, std::uint32_t d, double scale);

struct ScalarStats {
  // Each butterfly is counted as a 2x2 multiply, i.e. 4 MACs.
  std::uint64_t mac_equivalents = 0;
};

// Butterfly FWHT at strides 1, 2, 4, ..., d/2 per row, in F64, with
// `scale` applied once at the end. Output is rounded back to x's dtype.
void fwht_scalar_inplace(Matrix& x, double scale, ScalarStats* stats = nullptr);
[[nodiscard]] Matrix fwht_scalar(const Matrix& x, double scale,
                                 ScalarStats* stats = nullptr);

}  // namespace hdt

#endif  // HDT_REFERENCE_HPP_
