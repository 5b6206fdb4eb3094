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

// Clip input (Y4M, synthetic sequences) and CSV result tables.

#ifndef TPLCODEC_MEDIA_IO_H_
#define TPLCODEC_MEDIA_IO_H_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "tplcodec/frame.h"

namespace tplcodec {

class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Reads a YUV4MPEG2 stream. Only 4:2:0 and mono inputs are accepted; chroma
// planes are skipped.
Sequence parse_y4m(std::istream& in);
Sequence read_y4m(const std::filesystem::path& path);

// Writes the luma planes (original region) as a mono Y4M stream.
void write_y4m(const Sequence& seq, std::ostream& out);

enum class SynthKind { kStatic, kShift, kNoisyShift };

struct SynthParams {
  int dx = 0;
  int dy = 0;
  int noise_amplitude = 0;  // noisy_shift only; uniform in [-a, a]
  uint64_t seed = 1;
  double frame_rate = 30.0;
};

Sequence synth_sequence(SynthKind kind, int width, int height, int length,
                        const SynthParams& params = {});

SynthKind parse_synth_kind(const std::string& name);

using CsvValue = std::variant<int64_t, double, std::string>;

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<CsvValue>> rows;

  void add_row(std::vector<CsvValue> row) { rows.push_back(std::move(row)); }
};

std::string format_csv(const CsvTable& table);
void write_csv(const CsvTable& table, const std::filesystem::path& path);
// Cells that parse fully as numbers come back as double, the rest as strings.
CsvTable read_csv(const std::filesystem::path& path);

}  // namespace tplcodec

#endif  // TPLCODEC_MEDIA_IO_H_
