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

#ifndef HDT_TENSOR_IO_HPP_
#define HDT_TENSOR_IO_HPP_

#include <cstddef>
#include <filesystem>
#include <iosfwd>

#include "hdt/core_types.hpp"

namespace hdt {

// HDT1 layout, all integers little-endian:
//   "HDT1" | dtype code (u8) | rows (u32) | cols (u32) | payload
// The payload is row-major; F64/F32 are IEEE binary64/binary32, F16 and
// BF16 take 2 bytes each and FP8E4M3 one byte.
inline constexpr std::size_t kHeaderBytes = 13;

// Returns the number of bytes written.
std::size_t matrix_write(const Matrix& m, std::ostream& sink);
// Throws kBadMagic, kBadDtypeCode or kTruncatedPayload.
Matrix matrix_read(std::istream& source);

void save_matrix(const Matrix& m, const std::filesystem::path& path);
Matrix load_matrix(const std::filesystem::path& path);

}  // namespace hdt

#endif  // HDT_TENSOR_IO_HPP_
