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

#ifndef TPLCODEC_PREDICTION_H_
#define TPLCODEC_PREDICTION_H_

#include <cstdint>
#include <span>

#include "tplcodec/frame.h"
#include "tplcodec/transform.h"

namespace tplcodec {

struct MotionResult {
  MotionVector mv;
  int64_t sad = 0;
};

// Exhaustive integer-pel SAD search over center +/- range. Candidates whose
// predictor leaves the padded frame are skipped. Ties go to the smaller
// |mv_x| + |mv_y|, then to raster order (y, then x). The predictor for the
// block at (x, y) has its top-left at (x + mv.x, y + mv.y).
MotionResult motion_search(const Frame& cur, int x, int y, const Frame& ref,
                           MotionVector center, int range);

int64_t block_sad(const Frame& cur, int x, int y, const Frame& ref, MotionVector mv);

// Displaced block copy; coordinates are clamped into the padded frame.
PixelBlock predict_inter(const Frame& ref, int x, int y, MotionVector mv);

// Per-sample average rounded half up.
PixelBlock predict_compound(const PixelBlock& a, const PixelBlock& b);

// Mean of the reconstructed row above and column left of the block, 128 when
// the block sits at the top-left corner.
PixelBlock predict_intra_dc(const Frame& recon, int x, int y);

struct RdCost {
  double rate = 0.0;        // bits
  double distortion = 0.0;  // SSE

  double cost(double lambda) const { return distortion + lambda * rate; }
  bool operator==(const RdCost&) const = default;
};

struct CodedBlock {
  RdCost rd;
  PixelBlock recon;
};

// Transform-codes cur - pred at qstep. mv_diffs (zero, one or two vectors)
// are charged with se() bits on top of the coefficient bits.
CodedBlock code_block(const PixelBlock& cur, const PixelBlock& pred, double qstep,
                      std::span<const MotionVector> mv_diffs = {});

}  // namespace tplcodec

#endif  // TPLCODEC_PREDICTION_H_
