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

#include "tplcodec/tpl_model.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "tplcodec/grid.h"
#include "tplcodec/prediction.h"

namespace tplcodec {

namespace {

BlockFlowStats IntraStats(int bx, int by, const CodedBlock& coded) {
  BlockFlowStats s;
  s.bx = bx;
  s.by = by;
  s.mode = BlockMode::kIntra;
  s.r_src = s.r_rec = coded.rd.rate;
  s.d_src = s.d_rec = coded.rd.distortion;
  return s;
}

FrameFlow IntraCodeAnchor(const Frame& src, double qstep, Frame* recon) {
  *recon = src;
  FrameFlow flow{0, src.blocks_x(), src.blocks_y(), {}};
  for (int by = 0; by < src.blocks_y(); ++by) {
    for (int bx = 0; bx < src.blocks_x(); ++bx) {
      const int x = bx * kBlockSize;
      const int y = by * kBlockSize;
      const CodedBlock coded = code_block(src.block(x, y), predict_intra_dc(*recon, x, y), qstep);
      recon->set_block(x, y, coded.recon);
      flow.blocks.push_back(IntraStats(bx, by, coded));
    }
  }
  return flow;
}

// Anchor whose reconstruction is given: only its per-block distortion is
// known.
FrameFlow MeasureAnchor(const Frame& src, const Frame& recon) {
  FrameFlow flow{0, src.blocks_x(), src.blocks_y(), {}};
  for (int by = 0; by < src.blocks_y(); ++by) {
    for (int bx = 0; bx < src.blocks_x(); ++bx) {
      const int x = bx * kBlockSize;
      const int y = by * kBlockSize;
      BlockFlowStats s;
      s.bx = bx;
      s.by = by;
      s.d_src = s.d_rec = sse(src.block(x, y), recon.block(x, y));
      flow.blocks.push_back(s);
    }
  }
  return flow;
}

struct InterCandidate {
  BlockMode mode;
  int side;  // single-reference index, unused for compound
  CodedBlock rec;
  CodedBlock src;
};

}  // namespace

TplDiagnostics& TplDiagnostics::operator+=(const TplDiagnostics& o) {
  delta_d_above_d_rec += o.delta_d_above_d_rec;
  rho_above_one += o.rho_above_one;
  dropped_outside_grid += o.dropped_outside_grid;
  zero_denominator += o.zero_denominator;
  return *this;
}

FlowPass motion_flow_pass(const Sequence& segment, const GopPlan& plan, double tpl_qstep,
                          const AnchorSpec& anchor, const CodecConfig& config) {
  config.validate();
  if (!(tpl_qstep > 0.0)) throw std::invalid_argument("motion_flow_pass: qstep must be positive");
  if (segment.size() != static_cast<size_t>(plan.length) + 1 ||
      plan.frames.size() != static_cast<size_t>(plan.length)) {
    throw std::invalid_argument("motion_flow_pass: plan does not match segment");
  }
  for (const FramePlan& fp : plan.frames) {
    for (int r : fp.refs) {
      if (r < 0 || r > plan.length || plan.coding_position(r) >= fp.coding_order) {
        throw std::invalid_argument("motion_flow_pass: reference does not precede frame");
      }
    }
  }

  FlowPass pass;
  pass.plan = plan;
  pass.qstep = tpl_qstep;
  pass.lambda = config.lambda_for_qstep(tpl_qstep);
  pass.anchor_mode = anchor.mode;
  pass.source = segment.frames;
  pass.recon.resize(segment.size());
  pass.frames.resize(segment.size());

  switch (anchor.mode) {
    case AnchorMode::kIntraCoded:
      pass.frames[0] = IntraCodeAnchor(segment[0], tpl_qstep, &pass.recon[0]);
      break;
    case AnchorMode::kProvided:
      if (anchor.recon.width() != segment[0].width() ||
          anchor.recon.height() != segment[0].height()) {
        throw std::invalid_argument("motion_flow_pass: anchor reconstruction has wrong size");
      }
      pass.recon[0] = anchor.recon;
      pass.frames[0] = MeasureAnchor(segment[0], anchor.recon);
      break;
    case AnchorMode::kLossless:
      pass.recon[0] = segment[0];
      pass.frames[0] = MeasureAnchor(segment[0], segment[0]);
      break;
  }

  const double lambda = pass.lambda;
  for (const FramePlan& fp : plan.frames) {
    const Frame& cur = segment[fp.display_index];
    Frame recon = cur;
    FrameFlow flow{fp.display_index, cur.blocks_x(), cur.blocks_y(), {}};
    flow.blocks.reserve(static_cast<size_t>(flow.cols) * flow.rows);
    const int num_refs = static_cast<int>(fp.refs.size());

    for (int by = 0; by < cur.blocks_y(); ++by) {
      for (int bx = 0; bx < cur.blocks_x(); ++bx) {
        const int x = bx * kBlockSize;
        const int y = by * kBlockSize;
        const PixelBlock src_block = cur.block(x, y);
        const CodedBlock intra = code_block(src_block, predict_intra_dc(recon, x, y), tpl_qstep);
        if (num_refs == 0) {
          recon.set_block(x, y, intra.recon);
          flow.blocks.push_back(IntraStats(bx, by, intra));
          continue;
        }

        MotionVector mv[2];
        PixelBlock pred_rec[2];
        PixelBlock pred_src[2];
        std::vector<InterCandidate> cands;
        for (int i = 0; i < num_refs; ++i) {
          const Frame& ref_rec = pass.recon[fp.refs[i]];
          const Frame& ref_src = pass.source[fp.refs[i]];
          mv[i] = motion_search(cur, x, y, ref_rec, {0, 0}, config.search_range).mv;
          pred_rec[i] = predict_inter(ref_rec, x, y, mv[i]);
          pred_src[i] = predict_inter(ref_src, x, y, mv[i]);
          cands.push_back({BlockMode::kSingle, i,
                           code_block(src_block, pred_rec[i], tpl_qstep, std::span(&mv[i], 1)),
                           code_block(src_block, pred_src[i], tpl_qstep, std::span(&mv[i], 1))});
        }
        CodedBlock mixed[2];
        if (num_refs == 2) {
          const std::span<const MotionVector> mvs(mv, 2);
          cands.push_back(
              {BlockMode::kCompound, 0,
               code_block(src_block, predict_compound(pred_rec[0], pred_rec[1]), tpl_qstep, mvs),
               code_block(src_block, predict_compound(pred_src[0], pred_src[1]), tpl_qstep, mvs)});
          mixed[0] = code_block(src_block, predict_compound(pred_src[0], pred_rec[1]), tpl_qstep, mvs);
          mixed[1] = code_block(src_block, predict_compound(pred_rec[0], pred_src[1]), tpl_qstep, mvs);
        }

        // Inter mode as the final encode would pick it: against reconstructed
        // references.
        const InterCandidate* best = &cands[0];
        for (const InterCandidate& c : cands) {
          if (c.rec.rd.cost(lambda) < best->rec.rd.cost(lambda)) best = &c;
        }

        BlockFlowStats s;
        s.bx = bx;
        s.by = by;
        const PixelBlock src_pred = best->mode == BlockMode::kCompound
                                        ? predict_compound(pred_src[0], pred_src[1])
                                        : pred_src[best->side];
        s.sigma2_src = sse(src_block, src_pred);

        // Intra only cuts the dependency when it beats inter prediction from
        // source references.
        if (intra.rd.cost(lambda) < best->src.rd.cost(lambda)) {
          const double sigma2 = s.sigma2_src;
          s = IntraStats(bx, by, intra);
          s.sigma2_src = sigma2;
          recon.set_block(x, y, intra.recon);
          flow.blocks.push_back(s);
          continue;
        }

        s.mode = best->mode;
        s.r_src = best->src.rd.rate;
        s.d_src = best->src.rd.distortion;
        s.r_rec = best->rec.rd.rate;
        s.d_rec = best->rec.rd.distortion;
        if (best->mode == BlockMode::kCompound) {
          s.num_refs = 2;
          for (int side = 0; side < 2; ++side) {
            s.ref[side] = fp.refs[side];
            s.mv[side] = mv[side];
            s.r_mixed[side] = mixed[side].rd.rate;
            s.d_mixed[side] = mixed[side].rd.distortion;
            s.delta_d[side] = std::max(0.0, s.d_rec - s.d_mixed[side]);
            s.delta_r[side] = std::max(0.0, s.r_rec - s.r_mixed[side]);
          }
        } else {
          s.num_refs = 1;
          s.ref[0] = fp.refs[best->side];
          s.mv[0] = mv[best->side];
          s.delta_d[0] = std::max(0.0, s.d_rec - s.d_src);
          s.delta_r[0] = std::max(0.0, s.r_rec - s.r_src);
        }
        recon.set_block(x, y, best->rec.recon);
        flow.blocks.push_back(s);
      }
    }
    pass.recon[fp.display_index] = std::move(recon);
    pass.frames[fp.display_index] = std::move(flow);
  }
  return pass;
}

double delta_d_propagate(double delta_d, double d_rec, double acc_delta_d, TplDiagnostics* diag) {
  if (d_rec <= 0.0) return delta_d;
  double ratio = delta_d / d_rec;
  if (ratio > 1.0) {
    ratio = 1.0;
    if (diag) ++diag->delta_d_above_d_rec;
  }
  return delta_d + ratio * acc_delta_d;
}

double delta_r_propagate(double delta_r, double d_src, double d_rec, double acc_delta_r,
                         TplDiagnostics* diag) {
  double rho = d_rec > 0.0 ? d_src / d_rec : 1.0;
  if (rho > 1.0) {
    rho = 1.0;
    if (diag) ++diag->rho_above_one;
  }
  // log2(p / (rho p + 1 - rho)) with p = 2^(2 acc), rewritten so that large
  // accumulators do not overflow.
  const double tail = std::exp2(-2.0 * acc_delta_r);
  const double extra = -std::log2(rho + (1.0 - rho) * tail);
  return delta_r + std::max(0.0, extra);
}

TplGrid::TplGrid(int cols, int rows)
    : cols(cols),
      rows(rows),
      acc_delta_d(static_cast<size_t>(cols) * rows, 0.0),
      acc_delta_r(static_cast<size_t>(cols) * rows, 0.0) {}

bool distribute_to_grid(int x, int y, double value_d, double value_r, TplGrid& grid,
                        TplDiagnostics* diag) {
  const OverlapShares shares = overlap_shares(x, y, grid.cols, grid.rows);
  if (shares.count == 0) {
    if (diag) ++diag->dropped_outside_grid;
    return false;
  }
  for (const OverlapShare& s : shares) {
    const size_t i = static_cast<size_t>(s.by) * grid.cols + s.bx;
    grid.acc_delta_d[i] += value_d * s.weight;
    grid.acc_delta_r[i] += value_r * s.weight;
  }
  return true;
}

TplModel synthesize_dependency(const FlowPass& flow, CompoundSplit split) {
  TplModel model;
  model.grids.reserve(flow.frames.size());
  for (const FrameFlow& f : flow.frames) model.grids.emplace_back(f.cols, f.rows);

  // A frame's accumulators must be final before it propagates, so nothing
  // may be written into a frame that has already been visited.
  std::vector<bool> visited(flow.frames.size(), false);
  for (auto it = flow.plan.frames.rbegin(); it != flow.plan.frames.rend(); ++it) {
    const FrameFlow& f = flow.frames[it->display_index];
    const TplGrid& own = model.grids[it->display_index];
    visited[it->display_index] = true;
    for (const BlockFlowStats& b : f.blocks) {
      if (b.mode == BlockMode::kIntra) continue;
      const size_t k = static_cast<size_t>(b.by) * own.cols + b.bx;
      const double acc_d = own.acc_delta_d[k];
      const double acc_r = own.acc_delta_r[k];
      for (int side = 0; side < b.num_refs; ++side) {
        const int ref = b.ref[side];
        if (visited[ref]) {
          throw std::logic_error("synthesize_dependency: write into a settled frame");
        }
        double vd = delta_d_propagate(b.delta_d[side], b.d_rec, acc_d, &model.diag);
        double vr = delta_r_propagate(b.delta_r[side], b.d_src_side(side), b.d_rec, acc_r,
                                      &model.diag);
        if (split == CompoundSplit::kHalved && b.num_refs == 2) {
          vd *= 0.5;
          vr *= 0.5;
        }
        distribute_to_grid(b.bx * kBlockSize + b.mv[side].x, b.by * kBlockSize + b.mv[side].y, vd,
                           vr, model.grids[ref], &model.diag);
      }
    }
  }
  return model;
}

double beta_block(double acc_delta_d, double d_rec) {
  return d_rec > 0.0 ? acc_delta_d / d_rec : 0.0;
}

double beta_frame(const TplGrid& grid, const FrameFlow& flow) {
  double sum_dd = 0.0;
  double sum_drec = 0.0;
  for (const BlockFlowStats& b : flow.blocks) {
    sum_dd += grid.delta_d(b.bx, b.by);
    sum_drec += b.d_rec;
  }
  if (!(sum_drec > 0.0)) throw std::domain_error("beta_frame: frame has zero distortion");
  return sum_dd / sum_drec;
}

CsvTable tpl_dump_header() {
  return CsvTable{{"frame", "block_x", "block_y", "mode", "ref0", "mv0x", "mv0y", "R_src", "D_src",
                   "R_rec", "D_rec", "delta_d", "delta_r", "acc_delta_D", "acc_delta_R", "beta"},
                  {}};
}

void append_tpl_dump(const FlowPass& flow, const TplModel& model, int frame_offset,
                     bool include_anchor, CsvTable& table) {
  std::vector<int> order;
  if (include_anchor) order.push_back(0);
  for (const FramePlan& fp : flow.plan.frames) order.push_back(fp.display_index);
  for (int d : order) {
    const FrameFlow& f = flow.frames[d];
    const TplGrid& g = model.grids[d];
    for (const BlockFlowStats& b : f.blocks) {
      const double acc_d = g.delta_d(b.bx, b.by);
      table.add_row({int64_t{d + frame_offset}, int64_t{b.bx}, int64_t{b.by},
                     std::string(block_mode_name(b.mode)),
                     int64_t{b.ref[0] >= 0 ? b.ref[0] + frame_offset : -1}, int64_t{b.mv[0].x},
                     int64_t{b.mv[0].y}, b.r_src, b.d_src, b.r_rec, b.d_rec, b.delta_d[0],
                     b.delta_r[0], acc_d, g.delta_r(b.bx, b.by), beta_block(acc_d, b.d_rec)});
    }
  }
}

}  // namespace tplcodec
