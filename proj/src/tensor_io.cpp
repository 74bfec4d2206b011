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

#include "hdt/tensor_io.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <vector>

#include "hdt/float_formats.hpp"

namespace hdt {
namespace {

constexpr std::array<char, 4> kMagic = {'H', 'D', 'T', '1'};

template <typename U>
void put_le(std::vector<unsigned char>& out, U value) {
  for (std::size_t i = 0; i < sizeof(U); ++i) {
    out.push_back(static_cast<unsigned char>(value >> (8 * i)));
  }
}

template <typename U>
U get_le(const unsigned char* p) {
  U value = 0;
  for (std::size_t i = 0; i < sizeof(U); ++i) {
    value |= static_cast<U>(p[i]) << (8 * i);
  }
  return value;
}

void encode_value(std::vector<unsigned char>& out, double v, ElementType t) {
  switch (t) {
    case ElementType::kF64:
      put_le(out, std::bit_cast<std::uint64_t>(v));
      break;
    case ElementType::kF32:
      put_le(out, std::bit_cast<std::uint32_t>(static_cast<float>(v)));
      break;
    case ElementType::kF16:
      put_le(out, encode_f16(v));
      break;
    case ElementType::kBF16:
      put_le(out, encode_bf16(v));
      break;
    case ElementType::kFP8E4M3:
      out.push_back(encode_fp8e4m3(v));
      break;
  }
}

double decode_value(const unsigned char* p, ElementType t) {
  switch (t) {
    case ElementType::kF64:
      return std::bit_cast<double>(get_le<std::uint64_t>(p));
    case ElementType::kF32:
      return std::bit_cast<float>(get_le<std::uint32_t>(p));
    case ElementType::kF16:
      return decode_f16(get_le<std::uint16_t>(p));
    case ElementType::kBF16:
      return decode_bf16(get_le<std::uint16_t>(p));
    case ElementType::kFP8E4M3:
      return decode_fp8e4m3(*p);
  }
  return 0.0;
}

void read_exact(std::istream& in, unsigned char* dst, std::size_t n,
                const char* what) {
  in.read(reinterpret_cast<char*>(dst), static_cast<std::streamsize>(n));
  if (static_cast<std::size_t>(in.gcount()) != n) {
    throw Error(ErrorCode::kTruncatedPayload,
                std::string("stream ended inside the ") + what);
  }
}

}  // namespace

std::size_t matrix_write(const Matrix& m, std::ostream& sink) {
  if (m.rows() > std::numeric_limits<std::uint32_t>::max() ||
      m.cols() > std::numeric_limits<std::uint32_t>::max()) {
    throw Error(ErrorCode::kOutOfRange, "matrix too large for HDT1");
  }
  std::vector<unsigned char> bytes;
  bytes.reserve(kHeaderBytes + m.size() * element_size(m.dtype()));
  bytes.insert(bytes.end(), kMagic.begin(), kMagic.end());
  bytes.push_back(static_cast<unsigned char>(m.dtype()));
  put_le(bytes, static_cast<std::uint32_t>(m.rows()));
  put_le(bytes, static_cast<std::uint32_t>(m.cols()));
  for (double v : m.data()) encode_value(bytes, v, m.dtype());
  sink.write(reinterpret_cast<const char*>(bytes.data()),
             static_cast<std::streamsize>(bytes.size()));
  if (!sink) throw Error(ErrorCode::kIoError, "write failed");
  return bytes.size();
}

Matrix matrix_read(std::istream& source) {
  std::array<unsigned char, kHeaderBytes> header{};
  source.read(reinterpret_cast<char*>(header.data()), 4);
  if (source.gcount() != 4 ||
      !std::equal(kMagic.begin(), kMagic.end(), header.begin(),
                  [](char a, unsigned char b) {
                    return static_cast<unsigned char>(a) == b;
                  })) {
    throw Error(ErrorCode::kBadMagic, "missing HDT1 magic");
  }
  read_exact(source, header.data() + 4, 1, "header");
  if (header[4] > static_cast<unsigned char>(ElementType::kFP8E4M3)) {
    throw Error(ErrorCode::kBadDtypeCode,
                "dtype code " + std::to_string(header[4]));
  }
  const auto dtype = static_cast<ElementType>(header[4]);
  read_exact(source, header.data() + 5, 8, "header");
  const auto rows = get_le<std::uint32_t>(header.data() + 5);
  const auto cols = get_le<std::uint32_t>(header.data() + 9);

  const std::size_t count = static_cast<std::size_t>(rows) * cols;
  const std::size_t width = element_size(dtype);
  // Chunked so a corrupt header cannot force a huge up-front allocation.
  constexpr std::size_t kChunkElems = 1 << 16;
  std::vector<unsigned char> chunk(kChunkElems * width);
  std::vector<double> values;
  for (std::size_t done = 0; done < count;) {
    const std::size_t n = std::min(kChunkElems, count - done);
    read_exact(source, chunk.data(), n * width, "payload");
    for (std::size_t i = 0; i < n; ++i) {
      values.push_back(decode_value(chunk.data() + i * width, dtype));
    }
    done += n;
  }
  return Matrix(rows, cols, dtype, std::move(values));
}

void save_matrix(const Matrix& m, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIoError, "cannot open " + path.string());
  matrix_write(m, out);
}

Matrix load_matrix(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open " + path.string());
  return matrix_read(in);
}

}  // namespace hdt
