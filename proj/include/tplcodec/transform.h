// Copyright 2026 The tplcodec Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Residual coding primitives: 16x16 DCT, scalar quantizer, Exp-Golomb bit
// counting and the SSE / SATD distortion metrics.

#ifndef TPLCODEC_TRANSFORM_H_
#define TPLCODEC_TRANSFORM_H_

#include <array>
#include <cstdint>
#include <optional>
#include <span>

#include "tplcodec/frame.h"

namespace tplcodec {

using Coeffs = std::array<double, kBlockArea>;
using Levels = std::array<int, kBlockArea>;

struct MotionVector {
  int x = 0;
  int y = 0;

  friend bool operator==(const MotionVector&, const MotionVector&) = default;
};

// Orthonormal 2-D DCT-II and its inverse.
Coeffs dct16_forward(const Coeffs& block);
Coeffs dct16_inverse(const Coeffs& coeffs);

// Round to nearest, ties away from zero.
int quantize(double coeff, double qstep);
inline double dequantize(int level, double qstep) { return level * qstep; }

// Length of the signed Exp-Golomb code for v.
int se_bits(int64_t v);
inline int mv_bits(MotionVector mv) { return se_bits(mv.x) + se_bits(mv.y); }

// se() length of every level, plus both components of mv_diff when present.
int64_t block_bits(const Levels& levels, std::optional<MotionVector> mv_diff = std::nullopt);

// Throws std::invalid_argument on size mismatch.
double sse(std::span<const uint8_t> a, std::span<const uint8_t> b);

// Sum of absolute 8x8 Hadamard coefficients of a - b (unnormalized).
// Both blocks are width x (size / width); width and height must be
// multiples of 8.
double satd(std::span<const uint8_t> a, std::span<const uint8_t> b, int width = kBlockSize);

}  // namespace tplcodec

#endif  // TPLCODEC_TRANSFORM_H_
