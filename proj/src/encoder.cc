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

#include "tplcodec/encoder.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace tplcodec {

LambdaGrid LambdaGrid::Uniform(const Frame& frame, double lambda) {
  LambdaGrid g;
  g.cols = lcb_cols(frame);
  g.rows = lcb_rows(frame);
  g.values.assign(static_cast<size_t>(g.cols) * g.rows, lambda);
  return g;
}

const char* block_mode_name(BlockMode mode) {
  switch (mode) {
    case BlockMode::kIntra:
      return "intra";
    case BlockMode::kSingle:
      return "single";
    case BlockMode::kCompound:
      return "compound";
  }
  return "?";
}

double psnr(double mse) {
  if (mse < 0.0) throw std::invalid_argument("psnr: negative mse");
  if (mse == 0.0) return kPsnrCap;
  return std::min(kPsnrCap, 10.0 * std::log10(255.0 * 255.0 / mse));
}

FrameEncodeResult encode_frame(const Frame& cur, const FramePlan& plan,
                               std::span<const Frame* const> refs, const LambdaGrid& lambdas,
                               int search_range) {
  if (refs.size() != plan.refs.size()) {
    throw std::invalid_argument("encode_frame: reference count does not match plan");
  }
  for (const Frame* r : refs) {
    if (r == nullptr || r->empty()) throw std::invalid_argument("encode_frame: reference missing");
    if (r->width() != cur.width() || r->height() != cur.height()) {
      throw std::invalid_argument("encode_frame: reference dimension mismatch");
    }
  }
  if (lambdas.cols != lcb_cols(cur) || lambdas.rows != lcb_rows(cur)) {
    throw std::invalid_argument("encode_frame: lambda map does not cover the frame");
  }

  FrameEncodeResult out;
  out.recon = cur;
  FrameReport& rep = out.report;
  rep.display_index = plan.display_index;
  rep.coding_order = plan.coding_order;
  rep.level = plan.level;
  rep.qstep = plan.qstep;
  rep.blocks.reserve(static_cast<size_t>(cur.blocks_x()) * cur.blocks_y());

  for (int by = 0; by < cur.blocks_y(); ++by) {
    for (int bx = 0; bx < cur.blocks_x(); ++bx) {
      const int x = bx * kBlockSize;
      const int y = by * kBlockSize;
      const double lambda = lambdas.at(x / kLcbSize, y / kLcbSize);
      const PixelBlock src = cur.block(x, y);

      BlockDecision best;
      CodedBlock best_coded = code_block(src, predict_intra_dc(out.recon, x, y), plan.qstep);
      best.rd = best_coded.rd;
      double best_cost = best.rd.cost(lambda);

      auto consider = [&](BlockDecision cand, const CodedBlock& coded) {
        cand.rd = coded.rd;
        const double c = coded.rd.cost(lambda);
        if (c < best_cost) {
          best_cost = c;
          best = cand;
          best_coded = coded;
        }
      };

      PixelBlock preds[2];
      MotionVector mvs[2];
      for (size_t i = 0; i < refs.size(); ++i) {
        const MotionResult ms = motion_search(cur, x, y, *refs[i], {0, 0}, search_range);
        preds[i] = predict_inter(*refs[i], x, y, ms.mv);
        mvs[i] = ms.mv;
        BlockDecision cand;
        cand.mode = BlockMode::kSingle;
        cand.ref[0] = plan.refs[i];
        cand.mv[0] = ms.mv;
        consider(cand, code_block(src, preds[i], plan.qstep, std::span(cand.mv, 1)));
        if (i == 1) {
          BlockDecision comp;
          comp.mode = BlockMode::kCompound;
          comp.ref[0] = plan.refs[0];
          comp.ref[1] = plan.refs[1];
          comp.mv[0] = mvs[0];
          comp.mv[1] = mvs[1];
          consider(comp, code_block(src, predict_compound(preds[0], preds[1]), plan.qstep,
                                    std::span(comp.mv, 2)));
        }
      }

      out.recon.set_block(x, y, best_coded.recon);
      rep.bits += best.rd.rate;
      rep.blocks.push_back(best);
    }
  }
  rep.sse = frame_sse(cur, out.recon);
  rep.psnr = psnr(rep.sse / (static_cast<double>(cur.orig_width()) * cur.orig_height()));
  return out;
}

GroupEncodeResult encode_gop(const Sequence& segment, const Frame* anchor_recon,
                             const GopPlan& plan, const CodecConfig& config,
                             const LambdaMaps& maps, const std::map<int, double>& qstep_scale) {
  config.validate();
  if (segment.size() != static_cast<size_t>(plan.length) + 1) {
    throw std::invalid_argument("encode_gop: segment must hold the anchor plus the group");
  }
  auto lambda_grid = [&](int display, double qstep) {
    const auto it = maps.find(display);
    if (it != maps.end()) return it->second;
    return LambdaGrid::Uniform(segment[display], config.lambda_for_qstep(qstep));
  };
  auto scaled = [&](FramePlan fp) {
    const auto it = qstep_scale.find(fp.display_index);
    if (it != qstep_scale.end()) fp.qstep *= it->second;
    return fp;
  };

  GroupEncodeResult out;
  // Reserved up front so the recon pointers below stay valid.
  out.frames.reserve(segment.size());
  std::vector<const Frame*> recon(segment.size(), nullptr);
  if (anchor_recon) {
    recon[0] = anchor_recon;
  } else {
    const FramePlan anchor = scaled(plan.anchor);
    out.frames.push_back(
        encode_frame(segment[0], anchor, {}, lambda_grid(0, anchor.qstep), config.search_range));
    recon[0] = &out.frames.back().recon;
  }

  for (const FramePlan& planned : plan.frames) {
    const FramePlan fp = scaled(planned);
    std::vector<const Frame*> refs;
    for (int r : fp.refs) refs.push_back(recon[r]);
    out.frames.push_back(encode_frame(segment[fp.display_index], fp, refs,
                                      lambda_grid(fp.display_index, fp.qstep),
                                      config.search_range));
    recon[fp.display_index] = &out.frames.back().recon;
  }
  return out;
}

double EncodeReport::kbps() const {
  if (frames.empty()) return 0.0;
  return total_bits * recon.frame_rate / static_cast<double>(frames.size()) / 1000.0;
}

double EncodeReport::psnr() const {
  if (frames.empty()) return 0.0;
  return tplcodec::psnr(total_sse / (pixels_per_frame * static_cast<double>(frames.size())));
}

const FrameReport& EncodeReport::frame(int display_index) const {
  for (const FrameReport& f : frames) {
    if (f.display_index == display_index) return f;
  }
  throw std::out_of_range("frame not in report");
}

EncodeReport encode_sequence(const Sequence& seq, const CodecConfig& config,
                             const EncodeOptions& options) {
  config.validate();
  if (seq.frames.empty()) throw std::invalid_argument("encode_sequence: empty sequence");

  EncodeReport report;
  report.recon.frame_rate = seq.frame_rate;
  report.recon.frames.resize(seq.size());
  report.pixels_per_frame =
      static_cast<double>(seq[0].orig_width()) * static_cast<double>(seq[0].orig_height());

  const int n = static_cast<int>(seq.size());
  int coding_order = 0;
  auto append = [&](FrameEncodeResult& r, int first_display, GroupReport& group) {
    r.report.display_index += first_display;
    r.report.coding_order = coding_order++;
    for (BlockDecision& b : r.report.blocks) {
      for (int& ref : b.ref) {
        if (ref >= 0) ref += first_display;
      }
    }
    group.bits += r.report.bits;
    group.sse += r.report.sse;
    report.total_bits += r.report.bits;
    report.total_sse += r.report.sse;
    report.recon.frames[r.report.display_index] = std::move(r.recon);
    report.frames.push_back(std::move(r.report));
  };

  if (n == 1) {
    // Intra-only clip: a degenerate zero-length group.
    GopPlan plan = build_gop_plan(1, config);
    GroupReport group{0, 0, 0.0, 0.0};
    const FramePlan anchor = plan.anchor;
    FrameEncodeResult r = encode_frame(
        seq[0], anchor, {}, LambdaGrid::Uniform(seq[0], config.lambda_for_qstep(anchor.qstep)),
        config.search_range);
    append(r, 0, group);
    report.groups.push_back(group);
    return report;
  }

  for (int first = 0, g = 0; first < n - 1; first += config.gop_length, ++g) {
    const int length = std::min(config.gop_length, n - 1 - first);
    const GopPlan plan = build_gop_plan(length, config);
    const Sequence segment = seq.slice(first, length + 1);
    const Frame* anchor = g == 0 ? nullptr : &report.recon.frames[first];

    LambdaMaps maps;
    if (options.lambdas) maps = options.lambdas(GroupContext{segment, plan, anchor, g, first});
    std::map<int, double> scale;
    for (const auto& [display, s] : options.qstep_scale) {
      if (display >= first && display <= first + length && (display != first || g == 0)) {
        scale[display - first] = s;
      }
    }

    GroupEncodeResult res = encode_gop(segment, anchor, plan, config, maps, scale);
    GroupReport group{g == 0 ? 0 : first + 1, first + length, 0.0, 0.0};
    for (FrameEncodeResult& r : res.frames) append(r, first, group);
    report.groups.push_back(group);
  }
  return report;
}

}  // namespace tplcodec
