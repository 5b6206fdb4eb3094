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

// tplcodec: encode clips, dump model statistics and run the evaluation
// harness. Exit codes: 0 success, 1 runtime error, 2 usage error.

#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "tplcodec/harness.h"
#include "tplcodec/mbtree.h"
#include "tplcodec/rd_adaptation.h"
#include "tplcodec/tpl_model.h"

namespace fs = std::filesystem;
using namespace tplcodec;

namespace {

constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InputFlags {
  std::string input;
  std::string synth;
  int width = 64;
  int height = 64;
  int frames = 33;
  int dx = 1;
  int dy = 0;
  int noise = 0;
  uint64_t seed = 1;
};

struct ConfigFlags {
  std::optional<double> qstep;
  int gop_length = 16;
  std::string gop_mode = "pyramid";
  int search_range = 16;
};

void AddInputFlags(CLI::App* cmd, InputFlags& in) {
  auto* input = cmd->add_option("--input", in.input, "Y4M clip (luma is used)");
  auto* synth = cmd->add_option("--synth", in.synth, "synthetic clip: static|shift|noisy_shift");
  input->excludes(synth);
  cmd->add_option("--width", in.width, "synthetic width")->check(CLI::PositiveNumber);
  cmd->add_option("--height", in.height, "synthetic height")->check(CLI::PositiveNumber);
  cmd->add_option("--frames", in.frames, "frame count (truncates --input)")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--dx", in.dx, "synthetic motion per frame, x");
  cmd->add_option("--dy", in.dy, "synthetic motion per frame, y");
  cmd->add_option("--noise", in.noise, "noisy_shift amplitude")->check(CLI::NonNegativeNumber);
  cmd->add_option("--seed", in.seed, "noisy_shift seed");
}

void AddConfigFlags(CLI::App* cmd, ConfigFlags& cfg, bool qstep_required) {
  auto* q = cmd->add_option("--qstep", cfg.qstep, "leaf-frame quantization step");
  q->check(CLI::PositiveNumber);
  if (qstep_required) q->required();
  cmd->add_option("--gop-length", cfg.gop_length, "group length (power of two <= 16)");
  cmd->add_option("--gop-mode", cfg.gop_mode, "pyramid|low_delay");
  cmd->add_option("--search-range", cfg.search_range, "full-pel search range")
      ->check(CLI::NonNegativeNumber);
}

Sequence LoadInput(const InputFlags& in, bool frames_given) {
  if (in.input.empty() == in.synth.empty()) {
    throw UsageError("exactly one of --input and --synth is required");
  }
  if (!in.input.empty()) {
    Sequence seq = read_y4m(fs::absolute(in.input));
    if (frames_given && static_cast<size_t>(in.frames) < seq.size()) {
      seq = seq.slice(0, in.frames);
    }
    return seq;
  }
  SynthKind kind;
  try {
    kind = parse_synth_kind(in.synth);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  SynthParams p;
  p.dx = in.dx;
  p.dy = in.dy;
  p.noise_amplitude = in.noise;
  p.seed = in.seed;
  return synth_sequence(kind, in.width, in.height, in.frames, p);
}

CodecConfig MakeConfig(const ConfigFlags& f) {
  CodecConfig c;
  if (f.qstep) c.base_qstep = *f.qstep;
  c.gop_length = f.gop_length;
  c.search_range = f.search_range;
  try {
    c.gop_mode = parse_gop_mode(f.gop_mode);
    c.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  return c;
}

std::vector<LambdaModel> ParseModels(const std::vector<std::string>& names) {
  std::vector<LambdaModel> out;
  try {
    for (const std::string& n : names) out.push_back(parse_lambda_model(n));
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  return out;
}

CsvTable FrameTable(const EncodeReport& r) {
  CsvTable t{{"frame", "coding_order", "level", "qstep", "bits", "sse", "psnr"}, {}};
  for (const FrameReport& f : r.frames) {
    t.add_row({int64_t{f.display_index}, int64_t{f.coding_order}, int64_t{f.level}, f.qstep,
               f.bits, f.sse, f.psnr});
  }
  return t;
}

// Model passes group by group without a final encode. Later anchors come
// from the previous group's pass reconstruction.
void TplDump(const Sequence& seq, const CodecConfig& config, bool lossless_anchor,
             const fs::path& out_dir) {
  CsvTable tpl = tpl_dump_header();
  CsvTable mb = mbtree_dump_header();
  CsvTable lambda = lambda_map_header();
  const int n = static_cast<int>(seq.size());
  if (n < 2) throw std::invalid_argument("tpl-dump needs at least two frames");

  std::optional<Frame> prev_recon;
  for (int first = 0, g = 0; first < n - 1; first += config.gop_length, ++g) {
    const int length = std::min(config.gop_length, n - 1 - first);
    const GopPlan plan = build_gop_plan(length, config);
    const Sequence segment = seq.slice(first, length + 1);
    AnchorSpec anchor;
    if (lossless_anchor) {
      anchor.mode = AnchorMode::kLossless;
    } else if (prev_recon) {
      anchor = {AnchorMode::kProvided, *prev_recon};
    }
    const FlowPass flow = motion_flow_pass(segment, plan, config.base_qstep, anchor, config);
    const TplModel model = synthesize_dependency(flow);
    const MbTree tree = mbtree_pass(segment, plan, config, MbTreeVariant::kPlain, nullptr);
    const bool first_group = g == 0;
    append_tpl_dump(flow, model, first, first_group, tpl);
    append_mbtree_dump(tree, plan, first, first_group, mb);
    const auto fields = tpl_fields(flow, model);
    append_lambda_dump(build_lambda_maps(fields, plan, config, first_group), first, lambda);
    prev_recon = flow.recon.back();
  }
  write_csv(tpl, out_dir / "tpl_dump.csv");
  write_csv(mb, out_dir / "mbtree_dump.csv");
  write_csv(lambda, out_dir / "lambda_map.csv");
  std::printf("rows=%zu\n", tpl.rows.size());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"tplcodec: temporal dependency models on a toy block codec"};
  app.require_subcommand(1);

  InputFlags in;
  ConfigFlags cfg;
  std::string out_dir = ".";
  std::string model_name = "none";
  std::string recon_path;
  double perturb_ratio = kDefaultPerturbRatio;
  std::vector<double> qsteps;
  std::vector<std::string> model_names;
  bool lossless_anchor = false;
  bool no_timing = false;

  auto* encode = app.add_subcommand("encode", "encode a clip, write frames.csv");
  auto* dump = app.add_subcommand("tpl-dump", "model passes only, write per-block dumps");
  auto* observe = app.add_subcommand("observe", "measure beta_obs and model estimates");
  auto* accuracy = app.add_subcommand("accuracy", "beta accuracy sweep over qsteps");
  auto* bdrate = app.add_subcommand("bdrate", "RD curves and BD-rate against the baseline");

  for (CLI::App* cmd : {encode, dump, observe, accuracy, bdrate}) {
    AddInputFlags(cmd, in);
    cmd->add_option("--out-dir", out_dir, "output directory");
  }
  AddConfigFlags(encode, cfg, true);
  AddConfigFlags(dump, cfg, false);
  AddConfigFlags(observe, cfg, false);
  AddConfigFlags(accuracy, cfg, false);
  AddConfigFlags(bdrate, cfg, false);

  encode->add_option("--model", model_name, "none|tpl|mbtree|mbtree-quant|neutral");
  encode->add_option("--recon", recon_path, "write the reconstruction as Y4M");
  dump->add_flag("--lossless-anchor", lossless_anchor, "use the source as anchor reconstruction");
  for (CLI::App* cmd : {observe, accuracy}) {
    cmd->add_option("--perturb-ratio", perturb_ratio, "qstep multiplier on the measured frame")
        ->check(CLI::PositiveNumber);
  }
  accuracy->add_option("--qsteps", qsteps, "leaf qsteps")->delimiter(',');
  bdrate->add_option("--qsteps", qsteps, "leaf qsteps")->delimiter(',');
  bdrate->add_option("--models", model_names, "models to compare")->delimiter(',');
  bdrate->add_flag("--no-timing", no_timing, "write runtime_ratio as 0 for reproducible output");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    CLI::App* cmd = app.get_subcommands().front();
    const bool frames_given = cmd->count("--frames") > 0;
    const CodecConfig config = MakeConfig(cfg);
    const Sequence seq = LoadInput(in, frames_given);
    const fs::path dir = fs::absolute(out_dir);
    fs::create_directories(dir);

    if (cmd == encode) {
      const std::vector<LambdaModel> m = ParseModels({model_name});
      const EncodeReport r = encode_with_model(seq, config, m.front());
      write_csv(FrameTable(r), dir / "frames.csv");
      if (!recon_path.empty()) {
        std::ofstream f(fs::absolute(recon_path), std::ios::binary);
        if (!f) throw IoError("cannot open " + recon_path);
        write_y4m(r.recon, f);
      }
      std::printf("frames=%zu kbps=%.4f psnr=%.4f\n", r.frames.size(), r.kbps(), r.psnr());
    } else if (cmd == dump) {
      TplDump(seq, config, lossless_anchor, dir);
    } else if (cmd == observe) {
      const ObservationRuns runs = observe_beta_runs(seq, config, perturb_ratio);
      const BetaEstimates est = estimate_betas(seq, config, &runs.run1);
      const BetaObservation& o = runs.observation;
      CsvTable t{{"qstep", "frame", "group_d1", "group_d2", "frame_d1", "frame_d2", "beta_obs",
                  "beta_tpl", "beta_mb", "beta_mbq"},
                 {}};
      t.add_row({o.qstep, int64_t{o.frame}, o.group_d1, o.group_d2, o.frame_d1, o.frame_d2,
                 o.beta_obs, est.tpl, est.mbtree, est.mbtree_quant});
      write_csv(t, dir / "observe.csv");
      std::printf("beta_obs=%.6f beta_tpl=%.6f beta_mb=%.6f beta_mbq=%.6f\n", o.beta_obs,
                  est.tpl, est.mbtree, est.mbtree_quant);
    } else if (cmd == accuracy) {
      if (qsteps.empty()) qsteps.assign(std::begin(kAccuracyQsteps), std::end(kAccuracyQsteps));
      if (qsteps.size() < 2) throw UsageError("--qsteps needs at least two values");
      const auto rows = accuracy_sweep(seq, config, qsteps, perturb_ratio);
      write_csv(accuracy_table(rows), dir / "accuracy.csv");
      std::printf("rows=%zu\n", rows.size());
    } else {
      if (qsteps.empty()) qsteps.assign(std::begin(kRdQsteps), std::end(kRdQsteps));
      if (qsteps.size() < 4) throw UsageError("--qsteps needs at least four values");
      const std::vector<LambdaModel> models = ParseModels(model_names);
      const EncoderComparison cmp = compare_encoders(seq, config, qsteps, models);
      write_csv(rd_curve_table(cmp), dir / "rd_curves.csv");
      write_csv(bd_summary_table(cmp, !no_timing), dir / "bd_summary.csv");
      for (const ModelComparison& m : cmp.models) {
        std::printf("%s bd_rate=%.4f%%\n", lambda_model_name(m.model).c_str(),
                    m.bd.bd_rate_percent);
      }
    }
  } catch (const UsageError& e) {
    std::fprintf(stderr, "usage error: %s\n", e.what());
    return kExitUsage;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitRuntime;
  }
  return 0;
}
