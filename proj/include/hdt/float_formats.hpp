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

#ifndef HDT_FLOAT_FORMATS_HPP_
#define HDT_FLOAT_FORMATS_HPP_

#include <cstdint>

#include "hdt/core_types.hpp"

namespace hdt {

// Nearest value representable in `t`, ties to even, subnormals included.
// FP8E4M3 saturates to +-448; F16/BF16 throw kOverflowToInfinity when the
// rounded magnitude exceeds the largest finite value. F64 is the identity
// and F32 is a plain float conversion. NaN passes through.
double round_to(double x, ElementType t);

// Like round_to, but F16/BF16 overflow produces +-infinity.
double round_to_nonthrowing(double x, ElementType t);

double max_finite(ElementType t);

// Bit patterns of the emulated formats. The encoders round first.
std::uint16_t encode_f16(double x);
std::uint16_t encode_bf16(double x);
std::uint8_t encode_fp8e4m3(double x);

double decode_f16(std::uint16_t bits);
double decode_bf16(std::uint16_t bits);
double decode_fp8e4m3(std::uint8_t bits);

// Round-to-nearest-even on the binary32 pattern: keeps the top 16 bits.
std::uint16_t bf16_bits_from_f32_bits(std::uint32_t bits);

}  // namespace hdt

#endif  // HDT_FLOAT_FORMATS_HPP_
