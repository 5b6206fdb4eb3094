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

#include "tplcodec/frame.h"

#include <algorithm>
#include <stdexcept>

namespace tplcodec {

namespace {

int PadTo16(int v) { return (v + kBlockSize - 1) / kBlockSize * kBlockSize; }

}  // namespace

Frame::Frame(int width, int height, uint8_t fill)
    : width_(width), height_(height), orig_width_(width), orig_height_(height) {
  if (width <= 0 || height <= 0 || width % kBlockSize || height % kBlockSize) {
    throw std::invalid_argument("frame dimensions must be positive multiples of 16");
  }
  luma_.assign(static_cast<size_t>(width) * height, fill);
}

Frame Frame::FromPlane(int width, int height, std::span<const uint8_t> luma) {
  if (width <= 0 || height <= 0) {
    throw std::invalid_argument("frame dimensions must be positive");
  }
  if (luma.size() != static_cast<size_t>(width) * height) {
    throw std::invalid_argument("plane size does not match dimensions");
  }
  Frame f(PadTo16(width), PadTo16(height));
  f.orig_width_ = width;
  f.orig_height_ = height;
  for (int y = 0; y < f.height_; ++y) {
    const int sy = std::min(y, height - 1);
    for (int x = 0; x < f.width_; ++x) {
      const int sx = std::min(x, width - 1);
      f.at(x, y) = luma[static_cast<size_t>(sy) * width + sx];
    }
  }
  return f;
}

uint8_t Frame::clamped(int x, int y) const {
  return at(std::clamp(x, 0, width_ - 1), std::clamp(y, 0, height_ - 1));
}

PixelBlock Frame::block(int x, int y) const {
  PixelBlock b;
  for (int r = 0; r < kBlockSize; ++r) {
    for (int c = 0; c < kBlockSize; ++c) b[r * kBlockSize + c] = clamped(x + c, y + r);
  }
  return b;
}

void Frame::set_block(int x, int y, const PixelBlock& block) {
  for (int r = 0; r < kBlockSize; ++r) {
    std::copy_n(block.begin() + r * kBlockSize, kBlockSize,
                luma_.begin() + static_cast<size_t>(y + r) * width_ + x);
  }
}

Sequence Sequence::slice(size_t first, size_t count) const {
  if (first + count > frames.size()) throw std::out_of_range("sequence slice out of range");
  Sequence s;
  s.frame_rate = frame_rate;
  s.frames.assign(frames.begin() + first, frames.begin() + first + count);
  return s;
}

double frame_sse(const Frame& a, const Frame& b) {
  if (a.width() != b.width() || a.height() != b.height()) {
    throw std::invalid_argument("frame_sse: dimension mismatch");
  }
  double total = 0.0;
  for (int y = 0; y < a.orig_height(); ++y) {
    const uint8_t* ra = a.row(y);
    const uint8_t* rb = b.row(y);
    int64_t acc = 0;
    for (int x = 0; x < a.orig_width(); ++x) {
      const int d = int{ra[x]} - int{rb[x]};
      acc += d * d;
    }
    total += static_cast<double>(acc);
  }
  return total;
}

}  // namespace tplcodec
