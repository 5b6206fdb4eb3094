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

#include "tplcodec/mbtree.h"

#include <algorithm>
#include <stdexcept>

#include "tplcodec/grid.h"
#include "tplcodec/prediction.h"

namespace tplcodec {

double mbtree_rho(double s_intra, double s_inter) {
  if (s_intra <= 0.0) return 0.0;
  return std::clamp((s_intra - s_inter) / s_intra, 0.0, 1.0);
}

double mbtree_propagate(double c_cur, double s_intra, double rho) {
  return rho * (s_intra + c_cur);
}

double mbtree_quant_propagate(double c_cur, double s_intra, double rho, double d_rec,
                              double sigma2_src) {
  const double factor = sigma2_src > 0.0 ? std::clamp(d_rec / sigma2_src, 0.0, 1.0) : 1.0;
  return factor * mbtree_propagate(c_cur, s_intra, rho);
}

namespace {

MbTreeFrame AnalyzeFrame(const Sequence& segment, int display, const std::vector<int>& refs,
                         int search_range) {
  const Frame& cur = segment[display];
  MbTreeFrame out{display, cur.blocks_x(), cur.blocks_y(), {}};
  out.blocks.reserve(static_cast<size_t>(out.cols) * out.rows);
  for (int by = 0; by < cur.blocks_y(); ++by) {
    for (int bx = 0; bx < cur.blocks_x(); ++bx) {
      const int x = bx * kBlockSize;
      const int y = by * kBlockSize;
      const PixelBlock src = cur.block(x, y);
      MbTreeBlock b;
      b.bx = bx;
      b.by = by;
      b.s_intra = satd(src, predict_intra_dc(cur, x, y));
      b.s_inter = b.s_intra;
      PixelBlock preds[2];
      MotionVector mvs[2];
      for (size_t i = 0; i < refs.size(); ++i) {
        const Frame& ref = segment[refs[i]];
        mvs[i] = motion_search(cur, x, y, ref, {0, 0}, search_range).mv;
        preds[i] = predict_inter(ref, x, y, mvs[i]);
        const double cost = satd(src, preds[i]);
        if (i == 0 || cost < b.s_inter) {
          b.s_inter = cost;
          b.mode = BlockMode::kSingle;
          b.num_refs = 1;
          b.ref[0] = refs[i];
          b.mv[0] = mvs[i];
        }
      }
      if (refs.size() == 2) {
        const double cost = satd(src, predict_compound(preds[0], preds[1]));
        if (cost < b.s_inter) {
          b.s_inter = cost;
          b.mode = BlockMode::kCompound;
          b.num_refs = 2;
          for (int side = 0; side < 2; ++side) {
            b.ref[side] = refs[side];
            b.mv[side] = mvs[side];
          }
        }
      }
      b.rho = b.num_refs ? mbtree_rho(b.s_intra, b.s_inter) : 0.0;
      out.blocks.push_back(b);
    }
  }
  return out;
}

}  // namespace

MbTree mbtree_pass(const Sequence& segment, const GopPlan& plan, const CodecConfig& config,
                   MbTreeVariant variant, const FlowPass* flow) {
  config.validate();
  if (segment.size() != static_cast<size_t>(plan.length) + 1) {
    throw std::invalid_argument("mbtree_pass: plan does not match segment");
  }
  if (variant == MbTreeVariant::kQuant &&
      (flow == nullptr || flow->frames.size() != segment.size())) {
    throw std::invalid_argument("mbtree_pass: quant variant needs a flow pass over the segment");
  }

  MbTree tree;
  tree.variant = variant;
  tree.frames.resize(segment.size());
  tree.frames[0] = AnalyzeFrame(segment, 0, {}, config.search_range);
  for (const FramePlan& fp : plan.frames) {
    tree.frames[fp.display_index] =
        AnalyzeFrame(segment, fp.display_index, fp.refs, config.search_range);
  }
  if (flow) {
    for (MbTreeFrame& f : tree.frames) {
      const FrameFlow& ff = flow->frames[f.display_index];
      for (MbTreeBlock& b : f.blocks) {
        const BlockFlowStats& s = ff.at(b.bx, b.by);
        b.d_rec = s.d_rec;
        b.sigma2_src = s.sigma2_src;
      }
    }
  }

  std::vector<bool> visited(segment.size(), false);
  for (auto it = plan.frames.rbegin(); it != plan.frames.rend(); ++it) {
    MbTreeFrame& f = tree.frames[it->display_index];
    visited[it->display_index] = true;
    for (const MbTreeBlock& b : f.blocks) {
      if (b.num_refs == 0 || b.rho <= 0.0) continue;
      double amount = variant == MbTreeVariant::kQuant
                          ? mbtree_quant_propagate(b.c, b.s_intra, b.rho, b.d_rec, b.sigma2_src)
                          : mbtree_propagate(b.c, b.s_intra, b.rho);
      if (b.num_refs == 2) amount *= 0.5;
      for (int side = 0; side < b.num_refs; ++side) {
        MbTreeFrame& ref = tree.frames[b.ref[side]];
        if (visited[b.ref[side]]) throw std::logic_error("mbtree_pass: write into a settled frame");
        const OverlapShares shares = overlap_shares(b.bx * kBlockSize + b.mv[side].x,
                                                    b.by * kBlockSize + b.mv[side].y, ref.cols,
                                                    ref.rows);
        if (shares.count == 0) ++tree.diag.dropped_outside_grid;
        for (const OverlapShare& s : shares) ref.at(s.bx, s.by).c += amount * s.weight;
      }
    }
  }
  return tree;
}

double beta_mb_frame(const MbTreeFrame& frame) {
  double sum_c = 0.0;
  double sum_intra = 0.0;
  for (const MbTreeBlock& b : frame.blocks) {
    sum_c += b.c;
    sum_intra += b.s_intra;
  }
  if (!(sum_intra > 0.0)) throw std::domain_error("beta_mb_frame: zero intra cost");
  return sum_c / sum_intra;
}

CsvTable mbtree_dump_header() {
  return CsvTable{{"frame", "block_x", "block_y", "mode", "ref0", "mv0x", "mv0y", "S_intra",
                   "S_inter", "rho", "C"},
                  {}};
}

void append_mbtree_dump(const MbTree& tree, const GopPlan& plan, int frame_offset,
                        bool include_anchor, CsvTable& table) {
  std::vector<int> order;
  if (include_anchor) order.push_back(0);
  for (const FramePlan& fp : plan.frames) order.push_back(fp.display_index);
  for (int d : order) {
    for (const MbTreeBlock& b : tree.frames[d].blocks) {
      table.add_row({int64_t{d + frame_offset}, int64_t{b.bx}, int64_t{b.by},
                     std::string(block_mode_name(b.mode)),
                     int64_t{b.ref[0] >= 0 ? b.ref[0] + frame_offset : -1}, int64_t{b.mv[0].x},
                     int64_t{b.mv[0].y}, b.s_intra, b.s_inter, b.rho, b.c});
    }
  }
}

}  // namespace tplcodec
