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

#include "tplcodec/gop.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <functional>
#include <stdexcept>

namespace tplcodec {

GopMode parse_gop_mode(const std::string& name) {
  if (name == "low_delay" || name == "low-delay") return GopMode::kLowDelay;
  if (name == "pyramid") return GopMode::kPyramid;
  throw std::invalid_argument("unknown gop mode '" + name + "'");
}

void CodecConfig::validate() const {
  if (!(base_qstep > 0.0)) throw std::invalid_argument("base_qstep must be positive");
  if (gop_length < 1 || gop_length > 16 || !std::has_single_bit(static_cast<unsigned>(gop_length))) {
    throw std::invalid_argument("gop_length must be a power of two in [1, 16]");
  }
  if (search_range < 0) throw std::invalid_argument("search_range must be nonnegative");
  if (!(lambda_coeff > 0.0)) throw std::invalid_argument("lambda_coeff must be positive");
  for (double s : level_qstep_scale) {
    if (!(s > 0.0 && s <= 1.0)) throw std::invalid_argument("level_qstep_scale entries must be in (0, 1]");
  }
}

double CodecConfig::level_scale(int depth_below_leaf) const {
  if (depth_below_leaf <= 0) return 1.0;
  if (static_cast<size_t>(depth_below_leaf) < level_qstep_scale.size()) {
    return level_qstep_scale[depth_below_leaf];
  }
  return std::pow(2.0, -depth_below_leaf / 2.0);
}

const FramePlan& GopPlan::by_display(int display_index) const {
  if (display_index == 0) return anchor;
  for (const FramePlan& f : frames) {
    if (f.display_index == display_index) return f;
  }
  throw std::out_of_range("display index not in plan");
}

int GopPlan::coding_position(int display_index) const {
  if (display_index == 0) return -1;
  return by_display(display_index).coding_order;
}

GopPlan build_gop_plan(int length, const CodecConfig& config) {
  config.validate();
  if (length < 1) throw std::invalid_argument("group length must be positive");

  GopPlan plan;
  plan.length = length;
  std::vector<FramePlan> frames;
  if (config.gop_mode == GopMode::kLowDelay) {
    plan.leaf_level = 0;
    for (int d = 1; d <= length; ++d) frames.push_back({d, 0, 0, 0.0, {d - 1}, false});
  } else {
    frames.push_back({length, 0, 0, 0.0, {0}, false});
    int max_level = 0;
    std::function<void(int, int, int)> bisect = [&](int lo, int hi, int level) {
      const int mid = (lo + hi) / 2;
      if (mid <= lo || mid >= hi) return;
      max_level = std::max(max_level, level);
      frames.push_back({mid, 0, level, 0.0, {lo, hi}, false});
      bisect(lo, mid, level + 1);
      bisect(mid, hi, level + 1);
    };
    bisect(0, length, 1);
    plan.leaf_level = max_level;
  }

  for (size_t i = 0; i < frames.size(); ++i) {
    FramePlan& f = frames[i];
    f.coding_order = static_cast<int>(i);
    f.qstep = config.base_qstep * config.level_scale(plan.leaf_level - f.level);
    f.is_leaf = std::none_of(frames.begin(), frames.end(), [&](const FramePlan& o) {
      return std::find(o.refs.begin(), o.refs.end(), f.display_index) != o.refs.end();
    });
  }
  plan.anchor = {0, -1, 0, config.base_qstep * config.level_scale(plan.leaf_level), {}, false};
  plan.frames = std::move(frames);
  return plan;
}

}  // namespace tplcodec
