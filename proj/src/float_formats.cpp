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

#include "hdt/float_formats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace hdt {
namespace {

struct Format {
  int exp_bits;
  int man_bits;
  int bias;
  bool ieee_specials;  // all-ones exponent reserved for inf/NaN
  double max_finite;
};

constexpr Format kF16{5, 10, 15, true, 65504.0};
constexpr Format kBF16{8, 7, 127, true, 3.3895313892515355e38};
// E4M3: only S.1111.111 is NaN, no infinities.
constexpr Format kE4M3{4, 3, 7, false, 448.0};

const Format& format_of(ElementType t) {
  switch (t) {
    case ElementType::kF16:
      return kF16;
    case ElementType::kBF16:
      return kBF16;
    case ElementType::kFP8E4M3:
      return kE4M3;
    default:
      break;
  }
  throw Error(ErrorCode::kUnsupportedDtype, "not an emulated format");
}

// Rounds to the format's grid without range handling.
double round_to_grid(double x, const Format& f) {
  if (x == 0.0 || !std::isfinite(x)) return x;
  int e2 = 0;
  std::frexp(x, &e2);  // |x| = m * 2^e2, m in [0.5, 1)
  const int min_exp = 1 - f.bias;
  const int lead = std::max(e2 - 1, min_exp);
  const int quantum_exp = lead - f.man_bits;
  const double scaled = std::ldexp(x, -quantum_exp);
  // nearbyint honours the default round-to-nearest-even mode.
  return std::ldexp(std::nearbyint(scaled), quantum_exp);
}

double round_format(double x, const Format& f, bool throw_on_overflow) {
  if (std::isnan(x)) return x;
  const double r = round_to_grid(x, f);
  if (std::fabs(r) <= f.max_finite) return r;
  if (!f.ieee_specials) return std::copysign(f.max_finite, x);
  if (throw_on_overflow) {
    throw Error(ErrorCode::kOverflowToInfinity,
                "value " + std::to_string(x) + " overflows the target format");
  }
  return std::copysign(std::numeric_limits<double>::infinity(), x);
}

std::uint32_t encode_bits(double x, const Format& f) {
  const std::uint32_t sign_bit = 1u << (f.exp_bits + f.man_bits);
  const std::uint32_t exp_max = (1u << f.exp_bits) - 1;
  const std::uint32_t sign = std::signbit(x) ? sign_bit : 0u;
  if (std::isnan(x)) {
    return sign | (exp_max << f.man_bits) | ((1u << f.man_bits) - 1);
  }
  const double r = round_format(x, f, /*throw_on_overflow=*/false);
  if (std::isinf(r)) return sign | (exp_max << f.man_bits);
  const double a = std::fabs(r);
  if (a == 0.0) return sign;
  int e2 = 0;
  std::frexp(a, &e2);
  const int lead = e2 - 1;
  const int min_exp = 1 - f.bias;
  if (lead < min_exp) {
    const auto man = static_cast<std::uint32_t>(
        std::ldexp(a, f.man_bits - min_exp));
    return sign | man;
  }
  const auto biased = static_cast<std::uint32_t>(lead + f.bias);
  const auto man = static_cast<std::uint32_t>(
      std::ldexp(a, f.man_bits - lead) - std::ldexp(1.0, f.man_bits));
  return sign | (biased << f.man_bits) | man;
}

double decode_bits(std::uint32_t bits, const Format& f) {
  const std::uint32_t man_mask = (1u << f.man_bits) - 1;
  const std::uint32_t exp_max = (1u << f.exp_bits) - 1;
  const bool negative = (bits >> (f.exp_bits + f.man_bits)) & 1u;
  const std::uint32_t exp = (bits >> f.man_bits) & exp_max;
  const std::uint32_t man = bits & man_mask;
  double v = 0.0;
  if (exp == exp_max && f.ieee_specials) {
    v = man == 0 ? std::numeric_limits<double>::infinity()
                 : std::numeric_limits<double>::quiet_NaN();
  } else if (exp == exp_max && man == man_mask) {
    v = std::numeric_limits<double>::quiet_NaN();
  } else if (exp == 0) {
    v = std::ldexp(static_cast<double>(man), 1 - f.bias - f.man_bits);
  } else {
    v = std::ldexp(static_cast<double>(man | (1u << f.man_bits)),
                   static_cast<int>(exp) - f.bias - f.man_bits);
  }
  return negative ? -v : v;
}

}  // namespace

double round_to(double x, ElementType t) {
  switch (t) {
    case ElementType::kF64:
      return x;
    case ElementType::kF32:
      return static_cast<double>(static_cast<float>(x));
    default:
      return round_format(x, format_of(t), /*throw_on_overflow=*/true);
  }
}

double round_to_nonthrowing(double x, ElementType t) {
  switch (t) {
    case ElementType::kF64:
      return x;
    case ElementType::kF32:
      return static_cast<double>(static_cast<float>(x));
    default:
      return round_format(x, format_of(t), /*throw_on_overflow=*/false);
  }
}

double max_finite(ElementType t) {
  switch (t) {
    case ElementType::kF64:
      return std::numeric_limits<double>::max();
    case ElementType::kF32:
      return std::numeric_limits<float>::max();
    default:
      return format_of(t).max_finite;
  }
}

std::uint16_t encode_f16(double x) {
  return static_cast<std::uint16_t>(encode_bits(x, kF16));
}
std::uint16_t encode_bf16(double x) {
  return static_cast<std::uint16_t>(encode_bits(x, kBF16));
}
std::uint8_t encode_fp8e4m3(double x) {
  return static_cast<std::uint8_t>(encode_bits(x, kE4M3));
}

double decode_f16(std::uint16_t bits) { return decode_bits(bits, kF16); }
double decode_bf16(std::uint16_t bits) { return decode_bits(bits, kBF16); }
double decode_fp8e4m3(std::uint8_t bits) { return decode_bits(bits, kE4M3); }

std::uint16_t bf16_bits_from_f32_bits(std::uint32_t bits) {
  if ((bits & 0x7f800000u) == 0x7f800000u && (bits & 0x007fffffu) != 0) {
    return static_cast<std::uint16_t>((bits >> 16) | 0x0040u);  // quiet NaN
  }
  const std::uint32_t lsb = (bits >> 16) & 1u;
  bits += 0x7fffu + lsb;
  return static_cast<std::uint16_t>(bits >> 16);
}

}  // namespace hdt
