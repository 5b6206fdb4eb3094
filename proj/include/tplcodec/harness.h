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

// Ground-truth distortion propagation, model estimates and RD comparison.
//
// The observed propagation factor perturbs the qstep of the second group's
// first-coded (lowest-layer) frame and compares the group distortion of the
// two runs:
//
//   beta_obs = (D2 - D1) / (d2 - d1) - 1
//
// where D is the group total and d the perturbed frame's own distortion.

#ifndef TPLCODEC_HARNESS_H_
#define TPLCODEC_HARNESS_H_

#include <span>
#include <string>
#include <vector>

#include "tplcodec/encoder.h"
#include "tplcodec/gop.h"
#include "tplcodec/media_io.h"

namespace tplcodec {

inline constexpr double kDefaultPerturbRatio = 1.1;
inline constexpr double kAccuracyQsteps[] = {10.0, 20.0, 36.0, 56.0};
inline constexpr double kRdQsteps[] = {8.0, 16.0, 32.0, 56.0};

struct BetaObservation {
  double qstep = 0.0;
  int frame = 0;  // global display index of the perturbed frame
  double group_d1 = 0.0;
  double group_d2 = 0.0;
  double frame_d1 = 0.0;
  double frame_d2 = 0.0;
  double beta_obs = 0.0;
};

// beta_obs from the four distortions; throws when |d2 - d1| < 1e-9.
double beta_from_distortions(double group_d1, double group_d2, double frame_d1, double frame_d2);

struct ObservationRuns {
  BetaObservation observation;
  EncodeReport run1;
  EncodeReport run2;
};

// Encodes the first 2 * gop_length + 1 frames twice.
ObservationRuns observe_beta_runs(const Sequence& seq, const CodecConfig& config,
                                  double perturb_ratio = kDefaultPerturbRatio);
BetaObservation observe_beta(const Sequence& seq, const CodecConfig& config,
                             double perturb_ratio = kDefaultPerturbRatio);

struct BetaEstimates {
  double tpl = 0.0;
  double mbtree = 0.0;
  double mbtree_quant = 0.0;
};

// Model estimates for the same frame observe_beta perturbs. The second
// group's anchor reconstruction comes from `baseline` when given, otherwise
// from a fresh baseline encode.
BetaEstimates estimate_betas(const Sequence& seq, const CodecConfig& config,
                             const EncodeReport* baseline = nullptr);

struct AccuracyRow {
  double qstep = 0.0;
  double beta_obs = 0.0;
  double beta_tpl = 0.0;
  double beta_mb = 0.0;
  double beta_mbq = 0.0;
};

// One observation and three estimates per leaf qstep. Runs the qsteps
// concurrently; rows come back in input order.
std::vector<AccuracyRow> accuracy_sweep(const Sequence& seq, const CodecConfig& config,
                                        std::span<const double> qsteps,
                                        double perturb_ratio = kDefaultPerturbRatio);
CsvTable accuracy_table(std::span<const AccuracyRow> rows);

struct RdPoint {
  double kbps = 0.0;
  double psnr = 0.0;
};

struct BdResult {
  double bd_rate_percent = 0.0;
};

// Bjontegaard delta rate of curve_b against curve_a: cubic fit of log10 rate
// over PSNR, averaged over the shared PSNR interval. Negative means curve_b
// needs fewer bits.
BdResult bd_rate(std::span<const RdPoint> curve_a, std::span<const RdPoint> curve_b);

enum class LambdaModel {
  kNone,     // uniform lambda_n
  kTpl,
  kMbTree,
  kMbTreeQuant,
  kNeutral,  // control: constant alpha everywhere
};

LambdaModel parse_lambda_model(const std::string& name);
std::string lambda_model_name(LambdaModel model);

// Lambda maps for one group, computed the way an encoder would before coding
// it: model passes at the leaf qstep over the group segment.
LambdaProvider make_lambda_provider(LambdaModel model, const CodecConfig& config);

EncodeReport encode_with_model(const Sequence& seq, const CodecConfig& config, LambdaModel model);

struct ModelComparison {
  LambdaModel model = LambdaModel::kNone;
  std::vector<RdPoint> curve;
  BdResult bd;
  double runtime_ratio = 0.0;  // wall clock against the baseline encodes
};

struct EncoderComparison {
  std::vector<double> qsteps;
  std::vector<RdPoint> baseline;
  std::vector<ModelComparison> models;
};

EncoderComparison compare_encoders(
    const Sequence& seq, const CodecConfig& config, std::span<const double> qsteps,
    std::span<const LambdaModel> models = std::span<const LambdaModel>());

// model, qstep, kbps, psnr
CsvTable rd_curve_table(const EncoderComparison& cmp);
// model, bd_rate_percent, runtime_ratio
CsvTable bd_summary_table(const EncoderComparison& cmp, bool include_timing = true);

}  // namespace tplcodec

#endif  // TPLCODEC_HARNESS_H_
