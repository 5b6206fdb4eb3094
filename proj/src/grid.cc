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

#include "tplcodec/grid.h"

#include <algorithm>

#include "tplcodec/frame.h"

namespace tplcodec {

namespace {

// Floor division for possibly negative pixel coordinates.
int FloorDiv(int a, int b) { return a >= 0 ? a / b : -((-a + b - 1) / b); }

}  // namespace

OverlapShares overlap_shares(int x, int y, int cols, int rows) {
  OverlapShares out;
  const int bx0 = FloorDiv(x, kBlockSize);
  const int by0 = FloorDiv(y, kBlockSize);
  int total = 0;
  std::array<int, 4> areas{};
  for (int by = by0; by <= by0 + 1; ++by) {
    for (int bx = bx0; bx <= bx0 + 1; ++bx) {
      if (bx < 0 || by < 0 || bx >= cols || by >= rows) continue;
      const int w = std::min(x + kBlockSize, (bx + 1) * kBlockSize) - std::max(x, bx * kBlockSize);
      const int h = std::min(y + kBlockSize, (by + 1) * kBlockSize) - std::max(y, by * kBlockSize);
      if (w <= 0 || h <= 0) continue;
      areas[out.count] = w * h;
      out.shares[out.count++] = {bx, by, 0.0};
      total += w * h;
    }
  }
  for (int i = 0; i < out.count; ++i) {
    out.shares[i].weight = static_cast<double>(areas[i]) / total;
  }
  return out;
}

}  // namespace tplcodec
