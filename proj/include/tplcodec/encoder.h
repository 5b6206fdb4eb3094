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

// The final-pass block encoder: RD mode decision per 16x16 block with a
// per-LCB Lagrangian multiplier, frame and group sequencing.

#ifndef TPLCODEC_ENCODER_H_
#define TPLCODEC_ENCODER_H_

#include <functional>
#include <map>
#include <span>
#include <vector>

#include "tplcodec/frame.h"
#include "tplcodec/gop.h"
#include "tplcodec/prediction.h"

namespace tplcodec {

// Largest coding block: the unit of lambda adaptation, a 2x2 group of
// 16x16 operating blocks.
inline constexpr int kLcbSize = 32;
inline constexpr int kBlocksPerLcb = kLcbSize / kBlockSize;

inline int lcb_cols(const Frame& f) { return (f.width() + kLcbSize - 1) / kLcbSize; }
inline int lcb_rows(const Frame& f) { return (f.height() + kLcbSize - 1) / kLcbSize; }

struct LambdaGrid {
  int cols = 0;
  int rows = 0;
  std::vector<double> values;

  static LambdaGrid Uniform(const Frame& frame, double lambda);
  double at(int lcb_x, int lcb_y) const { return values[static_cast<size_t>(lcb_y) * cols + lcb_x]; }
  bool operator==(const LambdaGrid&) const = default;
};

enum class BlockMode { kIntra, kSingle, kCompound };

const char* block_mode_name(BlockMode mode);

struct BlockDecision {
  BlockMode mode = BlockMode::kIntra;
  int ref[2] = {-1, -1};  // display indices, -1 when unused
  MotionVector mv[2];
  RdCost rd;

  bool operator==(const BlockDecision&) const = default;
};

struct FrameReport {
  int display_index = 0;  // global
  int coding_order = 0;   // global
  int level = 0;
  double qstep = 0.0;
  double bits = 0.0;
  double sse = 0.0;  // original region
  double psnr = 0.0;
  std::vector<BlockDecision> blocks;  // raster order
};

struct FrameEncodeResult {
  FrameReport report;
  Frame recon;
};

// 10 log10(255^2 / mse); mse == 0 is reported as 100 dB.
double psnr(double mse);
inline constexpr double kPsnrCap = 100.0;

// Encodes one frame. refs holds the reconstructed frames named by plan.refs,
// in the same order; lambdas is the per-LCB multiplier map.
FrameEncodeResult encode_frame(const Frame& cur, const FramePlan& plan,
                               std::span<const Frame* const> refs, const LambdaGrid& lambdas,
                               int search_range);

// Lambda maps keyed by segment-relative display index. Frames without an
// entry use the uniform base multiplier.
using LambdaMaps = std::map<int, LambdaGrid>;

struct GroupContext {
  const Sequence& segment;    // anchor followed by the group's frames
  const GopPlan& plan;
  const Frame* anchor_recon;  // null when the anchor is intra-coded in this group
  int group_index = 0;
  int first_display = 0;  // global display index of the anchor
};

using LambdaProvider = std::function<LambdaMaps(const GroupContext&)>;

struct EncodeOptions {
  LambdaProvider lambdas;
  // Multiplier on the planned qstep, keyed by global display index.
  std::map<int, double> qstep_scale;
};

struct GroupEncodeResult {
  std::vector<FrameEncodeResult> frames;  // coding order; anchor first when coded here
};

// Encodes segment[1..] per plan. When anchor_recon is null the anchor is
// intra-coded first at plan.anchor.qstep. qstep_scale and maps use
// segment-relative display indices.
GroupEncodeResult encode_gop(const Sequence& segment, const Frame* anchor_recon,
                             const GopPlan& plan, const CodecConfig& config,
                             const LambdaMaps& maps = {},
                             const std::map<int, double>& qstep_scale = {});

struct GroupReport {
  int first_display = 0;
  int last_display = 0;
  double bits = 0.0;
  double sse = 0.0;
};

struct EncodeReport {
  std::vector<FrameReport> frames;  // coding order
  std::vector<GroupReport> groups;
  Sequence recon;                   // display order
  double total_bits = 0.0;
  double total_sse = 0.0;
  double pixels_per_frame = 0.0;

  double kbps() const;
  double psnr() const;  // from the aggregate MSE
  const FrameReport& frame(int display_index) const;
};

// Frame 0 is intra; the rest is split into groups of config.gop_length (the
// last group may be shorter), each anchored on the previous group's last
// frame.
EncodeReport encode_sequence(const Sequence& seq, const CodecConfig& config,
                             const EncodeOptions& options = {});

}  // namespace tplcodec

#endif  // TPLCODEC_ENCODER_H_
