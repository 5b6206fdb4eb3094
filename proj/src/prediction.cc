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

#include "tplcodec/prediction.h"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <stdexcept>

namespace tplcodec {

int64_t block_sad(const Frame& cur, int x, int y, const Frame& ref, MotionVector mv) {
  int64_t sad = 0;
  for (int r = 0; r < kBlockSize; ++r) {
    const uint8_t* a = cur.row(y + r) + x;
    const uint8_t* b = ref.row(y + r + mv.y) + x + mv.x;
    for (int c = 0; c < kBlockSize; ++c) sad += std::abs(int{a[c]} - int{b[c]});
  }
  return sad;
}

MotionResult motion_search(const Frame& cur, int x, int y, const Frame& ref,
                           MotionVector center, int range) {
  if (range < 0) throw std::invalid_argument("motion_search: negative range");
  if (cur.width() != ref.width() || cur.height() != ref.height()) {
    throw std::invalid_argument("motion_search: frame dimension mismatch");
  }
  const int min_x = std::max(center.x - range, -x);
  const int max_x = std::min(center.x + range, ref.width() - kBlockSize - x);
  const int min_y = std::max(center.y - range, -y);
  const int max_y = std::min(center.y + range, ref.height() - kBlockSize - y);

  MotionResult best{{0, 0}, std::numeric_limits<int64_t>::max()};
  int best_norm = std::numeric_limits<int>::max();
  for (int my = min_y; my <= max_y; ++my) {
    for (int mx = min_x; mx <= max_x; ++mx) {
      const int64_t sad = block_sad(cur, x, y, ref, {mx, my});
      const int norm = std::abs(mx) + std::abs(my);
      // Raster order is the scan order, so strict comparisons keep the first.
      if (sad < best.sad || (sad == best.sad && norm < best_norm)) {
        best = {{mx, my}, sad};
        best_norm = norm;
      }
    }
  }
  if (best.sad == std::numeric_limits<int64_t>::max()) {
    best = {{0, 0}, block_sad(cur, x, y, ref, {0, 0})};
  }
  return best;
}

PixelBlock predict_inter(const Frame& ref, int x, int y, MotionVector mv) {
  return ref.block(x + mv.x, y + mv.y);
}

PixelBlock predict_compound(const PixelBlock& a, const PixelBlock& b) {
  PixelBlock out;
  for (int i = 0; i < kBlockArea; ++i) {
    out[i] = static_cast<uint8_t>((int{a[i]} + int{b[i]} + 1) >> 1);
  }
  return out;
}

PixelBlock predict_intra_dc(const Frame& recon, int x, int y) {
  int sum = 0;
  int count = 0;
  if (y > 0) {
    for (int c = 0; c < kBlockSize; ++c) sum += recon.at(x + c, y - 1);
    count += kBlockSize;
  }
  if (x > 0) {
    for (int r = 0; r < kBlockSize; ++r) sum += recon.at(x - 1, y + r);
    count += kBlockSize;
  }
  PixelBlock out;
  out.fill(count ? static_cast<uint8_t>((sum + count / 2) / count) : uint8_t{128});
  return out;
}

CodedBlock code_block(const PixelBlock& cur, const PixelBlock& pred, double qstep,
                      std::span<const MotionVector> mv_diffs) {
  if (!(qstep > 0.0)) throw std::invalid_argument("code_block: qstep must be positive");
  Coeffs residual;
  for (int i = 0; i < kBlockArea; ++i) residual[i] = int{cur[i]} - int{pred[i]};
  const Coeffs coeffs = dct16_forward(residual);

  Levels levels;
  Coeffs dequant;
  bool any_nonzero = false;
  for (int i = 0; i < kBlockArea; ++i) {
    levels[i] = quantize(coeffs[i], qstep);
    dequant[i] = dequantize(levels[i], qstep);
    any_nonzero |= levels[i] != 0;
  }

  CodedBlock out;
  out.rd.rate = static_cast<double>(block_bits(levels));
  for (const MotionVector& mv : mv_diffs) out.rd.rate += mv_bits(mv);

  if (any_nonzero) {
    const Coeffs rec = dct16_inverse(dequant);
    for (int i = 0; i < kBlockArea; ++i) {
      const long v = std::lround(pred[i] + rec[i]);
      out.recon[i] = static_cast<uint8_t>(std::clamp(v, 0L, 255L));
    }
  } else {
    out.recon = pred;
  }
  out.rd.distortion = sse(cur, out.recon);
  return out;
}

}  // namespace tplcodec
