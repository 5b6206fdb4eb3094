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

#ifndef TPLCODEC_GOP_H_
#define TPLCODEC_GOP_H_

#include <string>
#include <vector>

namespace tplcodec {

enum class GopMode { kLowDelay, kPyramid };

GopMode parse_gop_mode(const std::string& name);

struct CodecConfig {
  double base_qstep = 16.0;  // leaf-frame quantization step
  int gop_length = 16;       // power of two, <= 16
  GopMode gop_mode = GopMode::kPyramid;
  int search_range = 16;
  double lambda_coeff = 0.85;
  // Multiplier on base_qstep indexed by depth below the leaf level. Empty
  // means 2^(-depth/2).
  std::vector<double> level_qstep_scale;

  void validate() const;
  double level_scale(int depth_below_leaf) const;
  double lambda_for_qstep(double qstep) const { return lambda_coeff * qstep * qstep; }
};

// One frame of a group. Display indices are relative to the group segment:
// 0 is the anchor (the previous group's last frame or the intra frame), the
// group's own frames are 1..length.
struct FramePlan {
  int display_index = 0;
  int coding_order = 0;
  int level = 0;  // 0 = lowest layer, leaf_level = top
  double qstep = 0.0;
  std::vector<int> refs;  // at most two, by display index
  bool is_leaf = false;
};

struct GopPlan {
  int length = 0;
  int leaf_level = 0;
  FramePlan anchor;               // display index 0, intra when coded in-group
  std::vector<FramePlan> frames;  // coding order

  const FramePlan& by_display(int display_index) const;
  // Coding position of a display index; the anchor is -1.
  int coding_position(int display_index) const;
};

// Plans a group of `length` frames following an anchor. Pyramid groups code
// the last frame first at level 0 and then bisect; low-delay groups code in
// display order, each frame referencing its predecessor.
GopPlan build_gop_plan(int length, const CodecConfig& config);

}  // namespace tplcodec

#endif  // TPLCODEC_GOP_H_
