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

// Per-LCB Lagrangian multiplier scaling from a propagation model.
//
// Each model reduces to a per-block (numerator, denominator) pair: the TPL
// model uses (acc_delta_d + lambda_tpl * acc_delta_r, D_rec), MB-tree uses
// (C, S_intra). alpha is sum(numerator) / sum(denominator) over an LCB or a
// whole frame, and
//
//   lambda_m = lambda_n * (1 + alpha_fr) / (1 + alpha_m)
//
// clamped to [lambda_n / 8, 8 lambda_n].

#ifndef TPLCODEC_RD_ADAPTATION_H_
#define TPLCODEC_RD_ADAPTATION_H_

#include <span>
#include <vector>

#include "tplcodec/encoder.h"
#include "tplcodec/gop.h"
#include "tplcodec/mbtree.h"
#include "tplcodec/media_io.h"
#include "tplcodec/tpl_model.h"

namespace tplcodec {

inline constexpr double kLambdaScaleLimit = 8.0;

struct TplBlockTerms {
  double acc_delta_d = 0.0;
  double acc_delta_r = 0.0;
  double d_rec = 0.0;
};

struct MbBlockTerms {
  double c = 0.0;
  double s_intra = 0.0;
};

// Falls back to `neutral` (and counts a diagnostic) when sum D_rec is 0.
double alpha_lcb_tpl(std::span<const TplBlockTerms> blocks, double lambda_tpl, double neutral,
                     TplDiagnostics* diag = nullptr);
// Throws std::domain_error when sum D_rec is 0.
double alpha_frame_tpl(std::span<const TplBlockTerms> blocks, double lambda_tpl);

double alpha_lcb_mbtree(std::span<const MbBlockTerms> blocks, double neutral,
                        TplDiagnostics* diag = nullptr);
double alpha_frame_mbtree(std::span<const MbBlockTerms> blocks);

double scale_lambda(double lambda_n, double alpha_fr, double alpha_m);

// Per-block alpha terms on the frame's 16x16 grid.
struct PropagationField {
  int display_index = 0;
  int cols = 0;
  int rows = 0;
  std::vector<double> numer;
  std::vector<double> denom;
};

std::vector<PropagationField> tpl_fields(const FlowPass& flow, const TplModel& model);
std::vector<PropagationField> mbtree_fields(const MbTree& tree);

struct LambdaMap {
  int display_index = 0;  // segment-relative
  int cols = 0;
  int rows = 0;
  double lambda_n = 0.0;
  double alpha_fr = 0.0;
  std::vector<double> alpha_m;
  std::vector<double> lambda_m;

  LambdaGrid grid() const { return {cols, rows, lambda_m}; }
};

// One map per field whose frame is coded by the group (the anchor only when
// anchor_coded). lambda_n comes from each frame's planned qstep.
std::vector<LambdaMap> build_lambda_maps(std::span<const PropagationField> fields,
                                         const GopPlan& plan, const CodecConfig& config,
                                         bool anchor_coded, TplDiagnostics* diag = nullptr);

LambdaMaps to_lambda_maps(std::span<const LambdaMap> maps);

// frame, lcb_x, lcb_y, alpha_m, alpha_fr, lambda_m
CsvTable lambda_map_header();
void append_lambda_dump(std::span<const LambdaMap> maps, int frame_offset, CsvTable& table);

}  // namespace tplcodec

#endif  // TPLCODEC_RD_ADAPTATION_H_
