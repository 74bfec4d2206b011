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

#ifndef HDT_PRECISION_HPP_
#define HDT_PRECISION_HPP_

#include "hdt/blocked.hpp"
#include "hdt/core_types.hpp"
#include "hdt/float_formats.hpp"

namespace hdt {

enum class AccumMode {
  // Every multiply-accumulate result is rounded to the storage format
  // (the FP16 tensor-core path).
  kNativeNarrow,
  // Accumulate in binary32, convert each stage output to the storage format
  // (the BF16 path, whose MMA only accumulates in FP32).
  kWideThenConvert,
};

// F16 -> kNativeNarrow, BF16 -> kWideThenConvert.
AccumMode default_accum_mode(ElementType t);

// Blocked transform with stage outputs held in x.dtype(), which must be F16
// or BF16. BF16 only supports kWideThenConvert. Throws kOverflowToInfinity
// if an intermediate leaves the format's range.
void transform_emulated_inplace(Matrix& x, const TransformSize& size,
                                const TransformOptions& opts, AccumMode mode,
                                EngineStats* stats = nullptr);
[[nodiscard]] Matrix transform_emulated(const Matrix& x,
                                        const TransformSize& size,
                                        const TransformOptions& opts,
                                        AccumMode mode,
                                        EngineStats* stats = nullptr);

}  // namespace hdt

#endif  // HDT_PRECISION_HPP_
