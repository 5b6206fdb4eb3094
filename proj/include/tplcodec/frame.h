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

#ifndef TPLCODEC_FRAME_H_
#define TPLCODEC_FRAME_H_

#include <array>
#include <cstdint>
#include <span>
#include <vector>

namespace tplcodec {

inline constexpr int kBlockSize = 16;
inline constexpr int kBlockArea = kBlockSize * kBlockSize;

// A 16x16 block of 8-bit samples, row-major.
using PixelBlock = std::array<uint8_t, kBlockArea>;

// One 8-bit luma plane. Stored dimensions are padded up to a multiple of 16
// by edge replication; the pre-pad dimensions are kept for PSNR.
class Frame {
 public:
  Frame() = default;

  // Blank frame; width and height must be positive multiples of 16.
  Frame(int width, int height, uint8_t fill = 0);

  // Copies a width x height plane and pads right/bottom by edge replication.
  static Frame FromPlane(int width, int height, std::span<const uint8_t> luma);

  int width() const { return width_; }
  int height() const { return height_; }
  int orig_width() const { return orig_width_; }
  int orig_height() const { return orig_height_; }
  int blocks_x() const { return width_ / kBlockSize; }
  int blocks_y() const { return height_ / kBlockSize; }
  bool empty() const { return luma_.empty(); }

  uint8_t at(int x, int y) const { return luma_[static_cast<size_t>(y) * width_ + x]; }
  uint8_t& at(int x, int y) { return luma_[static_cast<size_t>(y) * width_ + x]; }
  // Sample with coordinates clamped into the padded plane.
  uint8_t clamped(int x, int y) const;

  const uint8_t* row(int y) const { return luma_.data() + static_cast<size_t>(y) * width_; }
  std::span<const uint8_t> luma() const { return luma_; }

  PixelBlock block(int x, int y) const;
  void set_block(int x, int y, const PixelBlock& block);

  bool operator==(const Frame&) const = default;

 private:
  int width_ = 0;
  int height_ = 0;
  int orig_width_ = 0;
  int orig_height_ = 0;
  std::vector<uint8_t> luma_;
};

struct Sequence {
  std::vector<Frame> frames;
  double frame_rate = 30.0;

  size_t size() const { return frames.size(); }
  const Frame& operator[](size_t i) const { return frames[i]; }

  // Frames [first, first + count) as a new sequence.
  Sequence slice(size_t first, size_t count) const;
};

// Sum of squared differences over the original (pre-pad) region.
double frame_sse(const Frame& a, const Frame& b);

}  // namespace tplcodec

#endif  // TPLCODEC_FRAME_H_
