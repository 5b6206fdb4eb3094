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

// Macroblock-tree propagation over source frames, and its quantization-aware
// variant that scales each contribution by D_rec / sigma2.

#ifndef TPLCODEC_MBTREE_H_
#define TPLCODEC_MBTREE_H_

#include <vector>

#include "tplcodec/encoder.h"
#include "tplcodec/gop.h"
#include "tplcodec/media_io.h"
#include "tplcodec/tpl_model.h"

namespace tplcodec {

// (s_intra - s_inter) / s_intra clamped to [0, 1]; 0 when s_intra is 0.
double mbtree_rho(double s_intra, double s_inter);

// rho * (s_intra + c_cur)
double mbtree_propagate(double c_cur, double s_intra, double rho);

// f * rho * (s_intra + c_cur) with f = d_rec / sigma2_src clamped to [0, 1]
// (f = 1 when sigma2_src is 0).
double mbtree_quant_propagate(double c_cur, double s_intra, double rho, double d_rec,
                              double sigma2_src);

enum class MbTreeVariant { kPlain, kQuant };

struct MbTreeBlock {
  int bx = 0;
  int by = 0;
  double s_intra = 0.0;
  double s_inter = 0.0;
  double rho = 0.0;
  double c = 0.0;  // accumulated propagated SATD
  double d_rec = 0.0;
  double sigma2_src = 0.0;
  BlockMode mode = BlockMode::kIntra;  // best inter mode by SATD; kIntra without refs
  int num_refs = 0;
  int ref[2] = {-1, -1};
  MotionVector mv[2];
};

struct MbTreeFrame {
  int display_index = 0;
  int cols = 0;
  int rows = 0;
  std::vector<MbTreeBlock> blocks;  // raster order

  MbTreeBlock& at(int bx, int by) { return blocks[static_cast<size_t>(by) * cols + bx]; }
  const MbTreeBlock& at(int bx, int by) const { return blocks[static_cast<size_t>(by) * cols + bx]; }
};

struct MbTree {
  MbTreeVariant variant = MbTreeVariant::kPlain;
  std::vector<MbTreeFrame> frames;  // by segment display index, anchor at 0
  TplDiagnostics diag;
};

// First pass: source-only motion search and SATD costs in coding order.
// Second pass: C propagation in reverse coding order with the same overlap
// weighting as the TPL grid. Compound blocks send half of the propagated
// amount to each reference. The quant variant takes D_rec and sigma2 from a
// completed flow pass over the same segment and plan.
MbTree mbtree_pass(const Sequence& segment, const GopPlan& plan, const CodecConfig& config,
                   MbTreeVariant variant, const FlowPass* flow = nullptr);

// sum C / sum S_intra over the frame; throws when sum S_intra is 0.
double beta_mb_frame(const MbTreeFrame& frame);

// Per-block dump: frame, block_x, block_y, mode, ref0, mv0x, mv0y, S_intra,
// S_inter, rho, C.
CsvTable mbtree_dump_header();
void append_mbtree_dump(const MbTree& tree, const GopPlan& plan, int frame_offset,
                        bool include_anchor, CsvTable& table);

}  // namespace tplcodec

#endif  // TPLCODEC_MBTREE_H_
