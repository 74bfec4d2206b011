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

#include "hdt/precision.hpp"

#include <string>

#include "kernels.hpp"

namespace hdt {

AccumMode default_accum_mode(ElementType t) {
  return t == ElementType::kBF16 ? AccumMode::kWideThenConvert
                                 : AccumMode::kNativeNarrow;
}

void transform_emulated_inplace(Matrix& x, const TransformSize& size,
                                const TransformOptions& opts, AccumMode mode,
                                EngineStats* stats) {
  validate(opts);
  const ElementType t = x.dtype();
  if (t != ElementType::kF16 && t != ElementType::kBF16) {
    throw Error(ErrorCode::kUnsupportedDtype,
                "emulated transform needs f16 or bf16, got " +
                    std::string(element_type_name(t)));
  }
  if (t == ElementType::kBF16 && mode != AccumMode::kWideThenConvert) {
    throw Error(ErrorCode::kUnsupportedDtype,
                "bf16 only accumulates wide then converts");
  }
  if (opts.dtype != t) {
    throw Error(ErrorCode::kUnsupportedDtype,
                "options dtype does not match the matrix dtype");
  }
  if (x.cols() != size.d) {
    throw Error(ErrorCode::kDimensionMismatch,
                "matrix has " + std::to_string(x.cols()) +
                    " columns, transform size is " + std::to_string(size.d));
  }
  if (mode == AccumMode::kNativeNarrow) {
    internal::transform_matrix(x, size, opts.scale,
                               internal::NarrowAccumulate{t}, opts.workers,
                               stats);
  } else {
    internal::transform_matrix(x, size, opts.scale,
                               internal::WideThenConvert{t}, opts.workers,
                               stats);
  }
}

Matrix transform_emulated(const Matrix& x, const TransformSize& size,
                          const TransformOptions& opts, AccumMode mode,
                          EngineStats* stats) {
  Matrix out = x;
  transform_emulated_inplace(out, size, opts, mode, stats);
  return out;
}

}  // namespace hdt
