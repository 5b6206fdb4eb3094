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

#include "tplcodec/transform.h"

#include <bit>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace tplcodec {

namespace {

constexpr int N = kBlockSize;

using Basis = std::array<double, N * N>;

// basis[k * N + n] = s(k) cos(pi (2n + 1) k / 2N)
const Basis& DctBasis() {
  static const Basis basis = [] {
    Basis b{};
    for (int k = 0; k < N; ++k) {
      const double scale = k == 0 ? std::sqrt(1.0 / N) : std::sqrt(2.0 / N);
      for (int n = 0; n < N; ++n) {
        b[k * N + n] = scale * std::cos(std::numbers::pi * (2 * n + 1) * k / (2.0 * N));
      }
    }
    return b;
  }();
  return basis;
}

// out = B * in * B^T (forward) or B^T * in * B (inverse).
Coeffs Separable(const Coeffs& in, bool inverse) {
  const Basis& b = DctBasis();
  auto m = [&](int i, int j) { return inverse ? b[j * N + i] : b[i * N + j]; };
  Coeffs tmp{};
  for (int r = 0; r < N; ++r) {
    for (int k = 0; k < N; ++k) {
      double acc = 0.0;
      for (int n = 0; n < N; ++n) acc += m(k, n) * in[r * N + n];
      tmp[r * N + k] = acc;
    }
  }
  Coeffs out{};
  for (int c = 0; c < N; ++c) {
    for (int k = 0; k < N; ++k) {
      double acc = 0.0;
      for (int n = 0; n < N; ++n) acc += m(k, n) * tmp[n * N + c];
      out[k * N + c] = acc;
    }
  }
  return out;
}

void Hadamard8(std::array<int, 64>& d) {
  for (int pass = 0; pass < 2; ++pass) {
    for (int line = 0; line < 8; ++line) {
      const int base = pass == 0 ? line * 8 : line;
      const int step = pass == 0 ? 1 : 8;
      for (int len = 1; len < 8; len <<= 1) {
        for (int i = 0; i < 8; i += 2 * len) {
          for (int j = i; j < i + len; ++j) {
            const int a = d[base + j * step];
            const int b = d[base + (j + len) * step];
            d[base + j * step] = a + b;
            d[base + (j + len) * step] = a - b;
          }
        }
      }
    }
  }
}

}  // namespace

Coeffs dct16_forward(const Coeffs& block) { return Separable(block, false); }

Coeffs dct16_inverse(const Coeffs& coeffs) { return Separable(coeffs, true); }

int quantize(double coeff, double qstep) {
  if (!(qstep > 0.0)) throw std::invalid_argument("quantize: qstep must be positive");
  return static_cast<int>(std::round(coeff / qstep));
}

int se_bits(int64_t v) {
  // se(v) maps to ue(k) with k = 2|v| - 1 for v > 0 and k = 2|v| otherwise.
  const uint64_t mag = static_cast<uint64_t>(v < 0 ? -v : v);
  const uint64_t k = v > 0 ? 2 * mag - 1 : 2 * mag;
  return 2 * (std::bit_width(k + 1) - 1) + 1;
}

int64_t block_bits(const Levels& levels, std::optional<MotionVector> mv_diff) {
  int64_t bits = 0;
  for (int level : levels) bits += se_bits(level);
  if (mv_diff) bits += mv_bits(*mv_diff);
  return bits;
}

double sse(std::span<const uint8_t> a, std::span<const uint8_t> b) {
  if (a.size() != b.size()) throw std::invalid_argument("sse: dimension mismatch");
  int64_t acc = 0;
  for (size_t i = 0; i < a.size(); ++i) {
    const int d = int{a[i]} - int{b[i]};
    acc += d * d;
  }
  return static_cast<double>(acc);
}

double satd(std::span<const uint8_t> a, std::span<const uint8_t> b, int width) {
  if (a.size() != b.size()) throw std::invalid_argument("satd: dimension mismatch");
  if (width <= 0 || width % 8 || a.size() % width || (a.size() / width) % 8) {
    throw std::invalid_argument("satd: dimensions must be multiples of 8");
  }
  const int height = static_cast<int>(a.size() / width);
  int64_t total = 0;
  std::array<int, 64> d;
  for (int by = 0; by < height; by += 8) {
    for (int bx = 0; bx < width; bx += 8) {
      for (int r = 0; r < 8; ++r) {
        for (int c = 0; c < 8; ++c) {
          const size_t i = static_cast<size_t>(by + r) * width + bx + c;
          d[r * 8 + c] = int{a[i]} - int{b[i]};
        }
      }
      Hadamard8(d);
      for (int v : d) total += v < 0 ? -v : v;
    }
  }
  return static_cast<double>(total);
}

}  // namespace tplcodec
