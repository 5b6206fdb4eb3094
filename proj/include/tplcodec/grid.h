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

#ifndef TPLCODEC_GRID_H_
#define TPLCODEC_GRID_H_

#include <array>

namespace tplcodec {

struct OverlapShare {
  int bx = 0;
  int by = 0;
  double weight = 0.0;
};

// On-grid 16x16 blocks overlapped by the 16x16 rectangle whose top-left
// pixel is (x, y), clipped to a cols x rows block grid. Each weight is the
// block's overlap area over the total overlapped area, so the weights sum to
// one whenever count > 0.
struct OverlapShares {
  std::array<OverlapShare, 4> shares;
  int count = 0;

  const OverlapShare* begin() const { return shares.data(); }
  const OverlapShare* end() const { return shares.data() + count; }
};

OverlapShares overlap_shares(int x, int y, int cols, int rows);

}  // namespace tplcodec

#endif  // TPLCODEC_GRID_H_
