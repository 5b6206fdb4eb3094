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

#include "tplcodec/harness.h"

#include <chrono>
#include <cmath>
#include <future>
#include <stdexcept>

#include "tplcodec/mbtree.h"
#include "tplcodec/rd_adaptation.h"
#include "tplcodec/tpl_model.h"

namespace tplcodec {

namespace {

// Global display index of the second group's first-coded frame.
int MeasuredFrame(const CodecConfig& config) {
  const GopPlan plan = build_gop_plan(config.gop_length, config);
  return config.gop_length + plan.frames.front().display_index;
}

Sequence ObservationClip(const Sequence& seq, const CodecConfig& config) {
  const size_t needed = 2 * static_cast<size_t>(config.gop_length) + 1;
  if (seq.size() < needed) {
    throw std::invalid_argument("observation needs at least 2 * gop_length + 1 frames");
  }
  return seq.slice(0, static_cast<int>(needed));
}

double Seconds(std::chrono::steady_clock::duration d) {
  return std::chrono::duration<double>(d).count();
}

}  // namespace

double beta_from_distortions(double group_d1, double group_d2, double frame_d1, double frame_d2) {
  const double dd = frame_d2 - frame_d1;
  if (std::abs(dd) < 1e-9) {
    throw std::domain_error("beta_obs: perturbation did not change the frame distortion");
  }
  return (group_d2 - group_d1) / dd - 1.0;
}

ObservationRuns observe_beta_runs(const Sequence& seq, const CodecConfig& config,
                                  double perturb_ratio) {
  config.validate();
  const Sequence clip = ObservationClip(seq, config);
  const int measured = MeasuredFrame(config);

  ObservationRuns out;
  out.run1 = encode_sequence(clip, config);
  EncodeOptions perturbed;
  perturbed.qstep_scale[measured] = perturb_ratio;
  out.run2 = encode_sequence(clip, config, perturbed);

  BetaObservation& obs = out.observation;
  obs.qstep = config.base_qstep;
  obs.frame = measured;
  obs.group_d1 = out.run1.groups.at(1).sse;
  obs.group_d2 = out.run2.groups.at(1).sse;
  obs.frame_d1 = out.run1.frame(measured).sse;
  obs.frame_d2 = out.run2.frame(measured).sse;
  obs.beta_obs = beta_from_distortions(obs.group_d1, obs.group_d2, obs.frame_d1, obs.frame_d2);
  return out;
}

BetaObservation observe_beta(const Sequence& seq, const CodecConfig& config,
                             double perturb_ratio) {
  return observe_beta_runs(seq, config, perturb_ratio).observation;
}

BetaEstimates estimate_betas(const Sequence& seq, const CodecConfig& config,
                             const EncodeReport* baseline) {
  config.validate();
  const Sequence clip = ObservationClip(seq, config);
  EncodeReport fresh;
  if (baseline == nullptr) {
    fresh = encode_sequence(clip, config);
    baseline = &fresh;
  }
  const int length = config.gop_length;
  const Sequence segment = clip.slice(length, length + 1);
  const GopPlan plan = build_gop_plan(length, config);
  const int local = plan.frames.front().display_index;

  AnchorSpec anchor{AnchorMode::kProvided, baseline->recon[length]};
  const FlowPass flow = motion_flow_pass(segment, plan, config.base_qstep, anchor, config);
  const TplModel model = synthesize_dependency(flow);
  const MbTree plain = mbtree_pass(segment, plan, config, MbTreeVariant::kPlain, nullptr);
  const MbTree quant = mbtree_pass(segment, plan, config, MbTreeVariant::kQuant, &flow);

  BetaEstimates est;
  est.tpl = beta_frame(model.grids[local], flow.frames[local]);
  est.mbtree = beta_mb_frame(plain.frames[local]);
  est.mbtree_quant = beta_mb_frame(quant.frames[local]);
  return est;
}

std::vector<AccuracyRow> accuracy_sweep(const Sequence& seq, const CodecConfig& config,
                                        std::span<const double> qsteps, double perturb_ratio) {
  std::vector<std::future<AccuracyRow>> jobs;
  for (double q : qsteps) {
    jobs.push_back(std::async(std::launch::async, [&seq, config, q, perturb_ratio]() {
      CodecConfig c = config;
      c.base_qstep = q;
      const ObservationRuns runs = observe_beta_runs(seq, c, perturb_ratio);
      const BetaEstimates est = estimate_betas(seq, c, &runs.run1);
      return AccuracyRow{q, runs.observation.beta_obs, est.tpl, est.mbtree, est.mbtree_quant};
    }));
  }
  std::vector<AccuracyRow> rows;
  for (auto& j : jobs) rows.push_back(j.get());
  return rows;
}

CsvTable accuracy_table(std::span<const AccuracyRow> rows) {
  CsvTable t{{"qstep", "beta_obs", "beta_tpl", "beta_mb", "beta_mbq"}, {}};
  for (const AccuracyRow& r : rows) {
    t.add_row({r.qstep, r.beta_obs, r.beta_tpl, r.beta_mb, r.beta_mbq});
  }
  return t;
}

LambdaModel parse_lambda_model(const std::string& name) {
  if (name == "none") return LambdaModel::kNone;
  if (name == "tpl") return LambdaModel::kTpl;
  if (name == "mbtree") return LambdaModel::kMbTree;
  if (name == "mbtree-quant" || name == "mbtree_quant") return LambdaModel::kMbTreeQuant;
  if (name == "neutral") return LambdaModel::kNeutral;
  throw std::invalid_argument("unknown lambda model: " + name);
}

std::string lambda_model_name(LambdaModel model) {
  switch (model) {
    case LambdaModel::kNone:
      return "none";
    case LambdaModel::kTpl:
      return "tpl";
    case LambdaModel::kMbTree:
      return "mbtree";
    case LambdaModel::kMbTreeQuant:
      return "mbtree-quant";
    case LambdaModel::kNeutral:
      return "neutral";
  }
  return "unknown";
}

LambdaProvider make_lambda_provider(LambdaModel model, const CodecConfig& config) {
  if (model == LambdaModel::kNone) return {};
  return [model, config](const GroupContext& ctx) {
    const bool anchor_coded = ctx.anchor_recon == nullptr;
    auto flow_pass = [&]() {
      AnchorSpec anchor;
      if (ctx.anchor_recon) anchor = {AnchorMode::kProvided, *ctx.anchor_recon};
      return motion_flow_pass(ctx.segment, ctx.plan, config.base_qstep, anchor, config);
    };

    std::vector<PropagationField> fields;
    switch (model) {
      case LambdaModel::kTpl: {
        const FlowPass flow = flow_pass();
        fields = tpl_fields(flow, synthesize_dependency(flow));
        break;
      }
      case LambdaModel::kMbTree:
        fields = mbtree_fields(
            mbtree_pass(ctx.segment, ctx.plan, config, MbTreeVariant::kPlain, nullptr));
        break;
      case LambdaModel::kMbTreeQuant: {
        const FlowPass flow = flow_pass();
        fields = mbtree_fields(
            mbtree_pass(ctx.segment, ctx.plan, config, MbTreeVariant::kQuant, &flow));
        break;
      }
      default:
        for (size_t d = 0; d < ctx.segment.size(); ++d) {
          const Frame& f = ctx.segment[d];
          const size_t n = static_cast<size_t>(f.blocks_x()) * f.blocks_y();
          fields.push_back({static_cast<int>(d), f.blocks_x(), f.blocks_y(),
                            std::vector<double>(n, 1.0), std::vector<double>(n, 1.0)});
        }
        break;
    }
    return to_lambda_maps(build_lambda_maps(fields, ctx.plan, config, anchor_coded));
  };
}

EncodeReport encode_with_model(const Sequence& seq, const CodecConfig& config, LambdaModel model) {
  EncodeOptions options;
  options.lambdas = make_lambda_provider(model, config);
  return encode_sequence(seq, config, options);
}

EncoderComparison compare_encoders(const Sequence& seq, const CodecConfig& config,
                                   std::span<const double> qsteps,
                                   std::span<const LambdaModel> models) {
  static constexpr LambdaModel kDefaultModels[] = {LambdaModel::kMbTreeQuant, LambdaModel::kTpl};
  if (models.empty()) models = kDefaultModels;

  EncoderComparison cmp;
  cmp.qsteps.assign(qsteps.begin(), qsteps.end());
  double baseline_seconds = 0.0;
  for (double q : qsteps) {
    CodecConfig c = config;
    c.base_qstep = q;
    const auto t0 = std::chrono::steady_clock::now();
    const EncodeReport r = encode_sequence(seq, c);
    baseline_seconds += Seconds(std::chrono::steady_clock::now() - t0);
    cmp.baseline.push_back({r.kbps(), r.psnr()});
  }
  for (LambdaModel m : models) {
    ModelComparison mc;
    mc.model = m;
    double seconds = 0.0;
    for (double q : qsteps) {
      CodecConfig c = config;
      c.base_qstep = q;
      const auto t0 = std::chrono::steady_clock::now();
      const EncodeReport r = encode_with_model(seq, c, m);
      seconds += Seconds(std::chrono::steady_clock::now() - t0);
      mc.curve.push_back({r.kbps(), r.psnr()});
    }
    mc.bd = bd_rate(cmp.baseline, mc.curve);
    mc.runtime_ratio = baseline_seconds > 0.0 ? seconds / baseline_seconds : 0.0;
    cmp.models.push_back(std::move(mc));
  }
  return cmp;
}

CsvTable rd_curve_table(const EncoderComparison& cmp) {
  CsvTable t{{"model", "qstep", "kbps", "psnr"}, {}};
  for (size_t i = 0; i < cmp.qsteps.size(); ++i) {
    t.add_row({std::string("none"), cmp.qsteps[i], cmp.baseline[i].kbps, cmp.baseline[i].psnr});
  }
  for (const ModelComparison& m : cmp.models) {
    for (size_t i = 0; i < cmp.qsteps.size(); ++i) {
      t.add_row({lambda_model_name(m.model), cmp.qsteps[i], m.curve[i].kbps, m.curve[i].psnr});
    }
  }
  return t;
}

CsvTable bd_summary_table(const EncoderComparison& cmp, bool include_timing) {
  CsvTable t{{"model", "bd_rate_percent", "runtime_ratio"}, {}};
  for (const ModelComparison& m : cmp.models) {
    t.add_row({lambda_model_name(m.model), m.bd.bd_rate_percent,
               include_timing ? m.runtime_ratio : 0.0});
  }
  return t;
}

}  // namespace tplcodec
