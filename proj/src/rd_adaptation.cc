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

#include "tplcodec/rd_adaptation.h"

#include <algorithm>
#include <stdexcept>

namespace tplcodec {

namespace {

struct Sums {
  double numer = 0.0;
  double denom = 0.0;
};

Sums TplSums(std::span<const TplBlockTerms> blocks, double lambda_tpl) {
  Sums s;
  for (const TplBlockTerms& b : blocks) {
    s.numer += b.acc_delta_d + lambda_tpl * b.acc_delta_r;
    s.denom += b.d_rec;
  }
  return s;
}

Sums MbSums(std::span<const MbBlockTerms> blocks) {
  Sums s;
  for (const MbBlockTerms& b : blocks) {
    s.numer += b.c;
    s.denom += b.s_intra;
  }
  return s;
}

double RatioOr(const Sums& s, double neutral, TplDiagnostics* diag) {
  if (s.denom > 0.0) return s.numer / s.denom;
  if (diag) ++diag->zero_denominator;
  return neutral;
}

}  // namespace

double alpha_lcb_tpl(std::span<const TplBlockTerms> blocks, double lambda_tpl, double neutral,
                     TplDiagnostics* diag) {
  return RatioOr(TplSums(blocks, lambda_tpl), neutral, diag);
}

double alpha_frame_tpl(std::span<const TplBlockTerms> blocks, double lambda_tpl) {
  const Sums s = TplSums(blocks, lambda_tpl);
  if (!(s.denom > 0.0)) throw std::domain_error("alpha_frame_tpl: frame has zero distortion");
  return s.numer / s.denom;
}

double alpha_lcb_mbtree(std::span<const MbBlockTerms> blocks, double neutral,
                        TplDiagnostics* diag) {
  return RatioOr(MbSums(blocks), neutral, diag);
}

double alpha_frame_mbtree(std::span<const MbBlockTerms> blocks) {
  const Sums s = MbSums(blocks);
  if (!(s.denom > 0.0)) throw std::domain_error("alpha_frame_mbtree: zero intra cost");
  return s.numer / s.denom;
}

double scale_lambda(double lambda_n, double alpha_fr, double alpha_m) {
  // The ratio is formed first so equal alphas give exactly lambda_n.
  const double scaled = lambda_n * ((1.0 + alpha_fr) / (1.0 + alpha_m));
  return std::clamp(scaled, lambda_n / kLambdaScaleLimit, lambda_n * kLambdaScaleLimit);
}

std::vector<PropagationField> tpl_fields(const FlowPass& flow, const TplModel& model) {
  std::vector<PropagationField> out;
  for (size_t d = 0; d < flow.frames.size(); ++d) {
    const FrameFlow& f = flow.frames[d];
    const TplGrid& g = model.grids[d];
    PropagationField field{f.display_index, f.cols, f.rows, {}, {}};
    for (const BlockFlowStats& b : f.blocks) {
      field.numer.push_back(g.delta_d(b.bx, b.by) + flow.lambda * g.delta_r(b.bx, b.by));
      field.denom.push_back(b.d_rec);
    }
    out.push_back(std::move(field));
  }
  return out;
}

std::vector<PropagationField> mbtree_fields(const MbTree& tree) {
  std::vector<PropagationField> out;
  for (const MbTreeFrame& f : tree.frames) {
    PropagationField field{f.display_index, f.cols, f.rows, {}, {}};
    for (const MbTreeBlock& b : f.blocks) {
      field.numer.push_back(b.c);
      field.denom.push_back(b.s_intra);
    }
    out.push_back(std::move(field));
  }
  return out;
}

std::vector<LambdaMap> build_lambda_maps(std::span<const PropagationField> fields,
                                         const GopPlan& plan, const CodecConfig& config,
                                         bool anchor_coded, TplDiagnostics* diag) {
  std::vector<LambdaMap> maps;
  for (const PropagationField& field : fields) {
    if (field.display_index == 0 && !anchor_coded) continue;
    const FramePlan& fp = plan.by_display(field.display_index);

    LambdaMap map;
    map.display_index = field.display_index;
    map.cols = (field.cols + kBlocksPerLcb - 1) / kBlocksPerLcb;
    map.rows = (field.rows + kBlocksPerLcb - 1) / kBlocksPerLcb;
    map.lambda_n = config.lambda_for_qstep(fp.qstep);

    Sums frame;
    for (size_t i = 0; i < field.numer.size(); ++i) {
      frame.numer += field.numer[i];
      frame.denom += field.denom[i];
    }
    // A lossless frame scales nothing.
    map.alpha_fr = RatioOr(frame, 0.0, diag);

    for (int ly = 0; ly < map.rows; ++ly) {
      for (int lx = 0; lx < map.cols; ++lx) {
        Sums lcb;
        for (int by = ly * kBlocksPerLcb; by < std::min(field.rows, (ly + 1) * kBlocksPerLcb); ++by) {
          for (int bx = lx * kBlocksPerLcb; bx < std::min(field.cols, (lx + 1) * kBlocksPerLcb);
               ++bx) {
            const size_t k = static_cast<size_t>(by) * field.cols + bx;
            lcb.numer += field.numer[k];
            lcb.denom += field.denom[k];
          }
        }
        const double alpha = RatioOr(lcb, map.alpha_fr, diag);
        map.alpha_m.push_back(alpha);
        map.lambda_m.push_back(scale_lambda(map.lambda_n, map.alpha_fr, alpha));
      }
    }
    maps.push_back(std::move(map));
  }
  return maps;
}

LambdaMaps to_lambda_maps(std::span<const LambdaMap> maps) {
  LambdaMaps out;
  for (const LambdaMap& m : maps) out[m.display_index] = m.grid();
  return out;
}

CsvTable lambda_map_header() {
  return CsvTable{{"frame", "lcb_x", "lcb_y", "alpha_m", "alpha_fr", "lambda_m"}, {}};
}

void append_lambda_dump(std::span<const LambdaMap> maps, int frame_offset, CsvTable& table) {
  for (const LambdaMap& m : maps) {
    for (int ly = 0; ly < m.rows; ++ly) {
      for (int lx = 0; lx < m.cols; ++lx) {
        const size_t k = static_cast<size_t>(ly) * m.cols + lx;
        table.add_row({int64_t{m.display_index + frame_offset}, int64_t{lx}, int64_t{ly},
                       m.alpha_m[k], m.alpha_fr, m.lambda_m[k]});
      }
    }
  }
}

}  // namespace tplcodec
