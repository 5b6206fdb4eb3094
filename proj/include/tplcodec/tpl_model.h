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

// Temporal dependency model.
//
// The flow pass codes each group once at the leaf quantizer, keeping both a
// source and a reconstructed version of every frame. Each 16x16 block is
// coded against the reconstructed reference and, with the same motion
// vectors, against the source reference; the rate and distortion gaps
// (delta_d, delta_r) measure how much the reference's quantization error
// costs this block. For compound prediction each side is measured with the
// other side held reconstructed.
//
// Synthesis then walks the group in reverse coding order and pushes each
// block's accumulated cost (acc_delta_d, acc_delta_r) back onto the blocks
// its references overlap:
//
//   dD(ref) += delta_d + (delta_d / D_rec) * dD
//   dR(ref) += delta_r + log2(2^(2 dR) / (rho 2^(2 dR) + 1 - rho)),
//              rho = D_src / D_rec
//
// with off-grid contributions split by overlap area.

#ifndef TPLCODEC_TPL_MODEL_H_
#define TPLCODEC_TPL_MODEL_H_

#include <cstdint>
#include <vector>

#include "tplcodec/encoder.h"
#include "tplcodec/frame.h"
#include "tplcodec/gop.h"
#include "tplcodec/media_io.h"

namespace tplcodec {

// Counts of model-assumption violations. They are recorded, not thrown.
struct TplDiagnostics {
  int64_t delta_d_above_d_rec = 0;
  int64_t rho_above_one = 0;
  int64_t dropped_outside_grid = 0;
  int64_t zero_denominator = 0;

  TplDiagnostics& operator+=(const TplDiagnostics& o);
};

struct BlockFlowStats {
  int bx = 0;
  int by = 0;
  BlockMode mode = BlockMode::kIntra;
  int num_refs = 0;
  int ref[2] = {-1, -1};  // segment-relative display indices
  MotionVector mv[2];
  double r_src = 0.0, d_src = 0.0;
  double r_rec = 0.0, d_rec = 0.0;
  // Compound only: [0] = source first / reconstructed second reference,
  // [1] = reconstructed first / source second.
  double r_mixed[2] = {0.0, 0.0};
  double d_mixed[2] = {0.0, 0.0};
  double delta_d[2] = {0.0, 0.0};
  double delta_r[2] = {0.0, 0.0};
  // SSE of the source-reference prediction residual of the best inter mode.
  double sigma2_src = 0.0;

  // Distortion with this side's reference in source form.
  double d_src_side(int side) const { return mode == BlockMode::kCompound ? d_mixed[side] : d_src; }
};

struct FrameFlow {
  int display_index = 0;
  int cols = 0;
  int rows = 0;
  std::vector<BlockFlowStats> blocks;  // raster order

  const BlockFlowStats& at(int bx, int by) const { return blocks[static_cast<size_t>(by) * cols + bx]; }
};

enum class AnchorMode {
  kProvided,    // reconstruction supplied by the caller
  kIntraCoded,  // intra-coded inside the pass at the pass quantizer
  kLossless,    // reconstruction equals the source
};

struct AnchorSpec {
  AnchorMode mode = AnchorMode::kIntraCoded;
  Frame recon;  // kProvided only
};

struct FlowPass {
  GopPlan plan;
  double qstep = 0.0;
  double lambda = 0.0;
  AnchorMode anchor_mode = AnchorMode::kIntraCoded;
  std::vector<FrameFlow> frames;  // by segment display index, anchor at 0
  std::vector<Frame> recon;       // reconstructed bank
  std::vector<Frame> source;      // source bank
};

FlowPass motion_flow_pass(const Sequence& segment, const GopPlan& plan, double tpl_qstep,
                          const AnchorSpec& anchor, const CodecConfig& config);

// delta_d + (delta_d / d_rec) * acc_delta_d. The ratio is 0 when d_rec is 0
// and is clamped to 1 (with a diagnostic) when delta_d exceeds d_rec.
double delta_d_propagate(double delta_d, double d_rec, double acc_delta_d,
                         TplDiagnostics* diag = nullptr);

// delta_r + log2(2^(2 acc) / (rho 2^(2 acc) + 1 - rho)), rho = d_src / d_rec.
// rho is 1 when d_rec is 0 and is clamped to 1 (with a diagnostic) above.
double delta_r_propagate(double delta_r, double d_src, double d_rec, double acc_delta_r,
                         TplDiagnostics* diag = nullptr);

struct TplGrid {
  int cols = 0;
  int rows = 0;
  std::vector<double> acc_delta_d;
  std::vector<double> acc_delta_r;

  TplGrid() = default;
  TplGrid(int cols, int rows);
  double delta_d(int bx, int by) const { return acc_delta_d[static_cast<size_t>(by) * cols + bx]; }
  double delta_r(int bx, int by) const { return acc_delta_r[static_cast<size_t>(by) * cols + bx]; }
};

// Adds value_d / value_r to the blocks overlapped by the 16x16 rectangle at
// pixel (x, y). Returns false (and counts a diagnostic) if nothing overlaps.
bool distribute_to_grid(int x, int y, double value_d, double value_r, TplGrid& grid,
                        TplDiagnostics* diag = nullptr);

// How a compound block's propagated cost is apportioned to its references.
enum class CompoundSplit { kFullToEach, kHalved };

struct TplModel {
  std::vector<TplGrid> grids;  // by segment display index
  TplDiagnostics diag;
};

TplModel synthesize_dependency(const FlowPass& flow,
                               CompoundSplit split = CompoundSplit::kFullToEach);

// acc_delta_d / d_rec; 0 when d_rec is 0.
double beta_block(double acc_delta_d, double d_rec);
// Sum of acc_delta_d over sum of d_rec; throws when the frame is lossless.
double beta_frame(const TplGrid& grid, const FrameFlow& flow);

// Per-block dump: frame, block_x, block_y, mode, ref0, mv0x, mv0y, R_src,
// D_src, R_rec, D_rec, delta_d, delta_r, acc_delta_D, acc_delta_R, beta.
// frame_offset converts segment display indices to global ones; the anchor
// row block is skipped unless include_anchor.
void append_tpl_dump(const FlowPass& flow, const TplModel& model, int frame_offset,
                     bool include_anchor, CsvTable& table);
CsvTable tpl_dump_header();

}  // namespace tplcodec

#endif  // TPLCODEC_TPL_MODEL_H_
