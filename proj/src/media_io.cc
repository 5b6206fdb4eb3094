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

#include "tplcodec/media_io.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <numbers>
#include <ostream>
#include <random>
#include <sstream>

namespace tplcodec {

namespace {

constexpr char kY4mSignature[] = "YUV4MPEG2";
constexpr char kFrameMarker[] = "FRAME";

struct Y4mHeader {
  int width = 0;
  int height = 0;
  double frame_rate = 30.0;
  bool mono = false;
};

int ParsePositiveInt(const std::string& token, std::string_view digits) {
  int v = 0;
  auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), v);
  if (ec != std::errc() || ptr != digits.data() + digits.size() || v <= 0) {
    throw ParseError("y4m: malformed header token '" + token + "'");
  }
  return v;
}

Y4mHeader ParseHeader(const std::string& line) {
  std::istringstream ss(line);
  std::string token;
  ss >> token;
  if (token != kY4mSignature) {
    throw ParseError("y4m: missing YUV4MPEG2 signature, got '" + token + "'");
  }
  Y4mHeader h;
  while (ss >> token) {
    const std::string_view value = std::string_view(token).substr(1);
    switch (token[0]) {
      case 'W':
        h.width = ParsePositiveInt(token, value);
        break;
      case 'H':
        h.height = ParsePositiveInt(token, value);
        break;
      case 'F': {
        const size_t colon = value.find(':');
        if (colon == std::string_view::npos) {
          throw ParseError("y4m: malformed header token '" + token + "'");
        }
        const int num = ParsePositiveInt(token, value.substr(0, colon));
        const int den = ParsePositiveInt(token, value.substr(colon + 1));
        h.frame_rate = static_cast<double>(num) / den;
        break;
      }
      case 'C':
        if (value.starts_with("420")) {
          h.mono = false;
        } else if (value == "mono") {
          h.mono = true;
        } else {
          throw ParseError("y4m: unsupported colorspace token '" + token + "'");
        }
        break;
      case 'I':
      case 'A':
      case 'X':
        break;
      default:
        throw ParseError("y4m: unknown header token '" + token + "'");
    }
  }
  if (h.width == 0) throw ParseError("y4m: header has no W token");
  if (h.height == 0) throw ParseError("y4m: header has no H token");
  return h;
}

bool ReadLine(std::istream& in, std::string* line) {
  line->clear();
  char c;
  bool any = false;
  while (in.get(c)) {
    any = true;
    if (c == '\n') return true;
    line->push_back(c);
  }
  return any;
}

// Fixed texture hash; independent of any seed so every synthetic clip shares
// the same base picture.
int TextureHash(int x, int y) {
  uint32_t h = static_cast<uint32_t>(x) * 0x9E3779B1u ^ static_cast<uint32_t>(y) * 0x85EBCA77u;
  h ^= h >> 15;
  h *= 0x2C1B3C6Du;
  h ^= h >> 12;
  return static_cast<int>(h % 21) - 10;
}

std::vector<uint8_t> BasePattern(int width, int height) {
  constexpr double kTwoPi = 2.0 * std::numbers::pi;
  std::vector<uint8_t> base(static_cast<size_t>(width) * height);
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      const double v = 128.0 + 45.0 * std::sin(kTwoPi * x / 23.7 + 1.3 * std::sin(kTwoPi * y / 53.1)) +
                       35.0 * std::sin(kTwoPi * (0.6 * x + 0.8 * y) / 15.3) + TextureHash(x, y);
      base[static_cast<size_t>(y) * width + x] =
          static_cast<uint8_t>(std::clamp(std::lround(v), 0L, 255L));
    }
  }
  return base;
}

std::string FormatValue(const CsvValue& v) {
  if (const auto* i = std::get_if<int64_t>(&v)) return std::to_string(*i);
  if (const auto* d = std::get_if<double>(&v)) {
    if (std::isnan(*d)) return "nan";
    if (std::isinf(*d)) return *d > 0 ? "inf" : "-inf";
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.10g", *d);
    return buf;
  }
  const std::string& s = std::get<std::string>(v);
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string quoted = "\"";
  for (char c : s) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  return quoted + "\"";
}

}  // namespace

Sequence parse_y4m(std::istream& in) {
  std::string line;
  if (!ReadLine(in, &line)) throw ParseError("y4m: empty stream");
  const Y4mHeader h = ParseHeader(line);

  const size_t luma_size = static_cast<size_t>(h.width) * h.height;
  const size_t chroma_size =
      h.mono ? 0 : 2 * static_cast<size_t>((h.width + 1) / 2) * ((h.height + 1) / 2);

  Sequence seq;
  seq.frame_rate = h.frame_rate;
  std::vector<uint8_t> luma(luma_size);
  while (ReadLine(in, &line)) {
    const int index = static_cast<int>(seq.frames.size());
    if (!line.starts_with(kFrameMarker)) {
      throw ParseError("y4m: expected FRAME marker before frame " + std::to_string(index));
    }
    in.read(reinterpret_cast<char*>(luma.data()), static_cast<std::streamsize>(luma_size));
    if (static_cast<size_t>(in.gcount()) != luma_size) {
      throw ParseError("y4m: truncated luma payload in frame " + std::to_string(index));
    }
    in.ignore(static_cast<std::streamsize>(chroma_size));
    if (static_cast<size_t>(in.gcount()) != chroma_size) {
      throw ParseError("y4m: truncated chroma payload in frame " + std::to_string(index));
    }
    seq.frames.push_back(Frame::FromPlane(h.width, h.height, luma));
  }
  if (seq.frames.empty()) throw ParseError("y4m: stream contains no frames");
  return seq;
}

Sequence read_y4m(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  return parse_y4m(in);
}

void write_y4m(const Sequence& seq, std::ostream& out) {
  if (seq.frames.empty()) throw std::invalid_argument("write_y4m: empty sequence");
  const Frame& first = seq.frames.front();
  // Frame rate is written as a millihertz fraction.
  const long rate = std::lround(seq.frame_rate * 1000.0);
  out << kY4mSignature << " W" << first.orig_width() << " H" << first.orig_height() << " F" << rate
      << ":1000 Ip A1:1 Cmono\n";
  for (const Frame& f : seq.frames) {
    out << kFrameMarker << '\n';
    for (int y = 0; y < f.orig_height(); ++y) {
      out.write(reinterpret_cast<const char*>(f.row(y)), f.orig_width());
    }
  }
  if (!out) throw IoError("write_y4m: stream write failed");
}

Sequence synth_sequence(SynthKind kind, int width, int height, int length,
                        const SynthParams& params) {
  if (width <= 0 || height <= 0 || length <= 0) {
    throw std::invalid_argument("synth_sequence: dimensions and length must be positive");
  }
  if (params.noise_amplitude < 0) {
    throw std::invalid_argument("synth_sequence: noise amplitude must be nonnegative");
  }
  const std::vector<uint8_t> base = BasePattern(width, height);
  const int dx = kind == SynthKind::kStatic ? 0 : params.dx;
  const int dy = kind == SynthKind::kStatic ? 0 : params.dy;
  const int amp = kind == SynthKind::kNoisyShift ? params.noise_amplitude : 0;

  std::mt19937_64 rng(params.seed);
  Sequence seq;
  seq.frame_rate = params.frame_rate;
  std::vector<uint8_t> plane(base.size());
  for (int n = 0; n < length; ++n) {
    for (int y = 0; y < height; ++y) {
      const int sy = std::clamp(y - n * dy, 0, height - 1);
      for (int x = 0; x < width; ++x) {
        const int sx = std::clamp(x - n * dx, 0, width - 1);
        int v = base[static_cast<size_t>(sy) * width + sx];
        if (amp > 0) {
          v += static_cast<int>(rng() % static_cast<uint64_t>(2 * amp + 1)) - amp;
        }
        plane[static_cast<size_t>(y) * width + x] = static_cast<uint8_t>(std::clamp(v, 0, 255));
      }
    }
    seq.frames.push_back(Frame::FromPlane(width, height, plane));
  }
  return seq;
}

SynthKind parse_synth_kind(const std::string& name) {
  if (name == "static") return SynthKind::kStatic;
  if (name == "shift") return SynthKind::kShift;
  if (name == "noisy_shift" || name == "noisy-shift") return SynthKind::kNoisyShift;
  throw std::invalid_argument("unknown synthetic sequence kind '" + name + "'");
}

std::string format_csv(const CsvTable& table) {
  std::string out;
  for (size_t i = 0; i < table.header.size(); ++i) {
    if (i) out += ',';
    out += FormatValue(table.header[i]);
  }
  out += '\n';
  for (const auto& row : table.rows) {
    if (row.size() != table.header.size()) {
      throw std::invalid_argument("csv: row width does not match header");
    }
    for (size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      out += FormatValue(row[i]);
    }
    out += '\n';
  }
  return out;
}

void write_csv(const CsvTable& table, const std::filesystem::path& path) {
  const std::string text = format_csv(table);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << text;
  out.flush();
  if (!out) throw IoError("write failed for " + path.string());
}

CsvTable read_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());

  auto split = [](const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    bool quoted = false;
    for (size_t i = 0; i < line.size(); ++i) {
      const char c = line[i];
      if (quoted) {
        if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
          cell += '"';
          ++i;
        } else if (c == '"') {
          quoted = false;
        } else {
          cell += c;
        }
      } else if (c == '"') {
        quoted = true;
      } else if (c == ',') {
        cells.push_back(std::move(cell));
        cell.clear();
      } else {
        cell += c;
      }
    }
    cells.push_back(std::move(cell));
    return cells;
  };

  CsvTable table;
  std::string line;
  if (!std::getline(in, line)) throw ParseError("csv: missing header in " + path.string());
  table.header = split(line);
  while (std::getline(in, line)) {
    std::vector<CsvValue> row;
    for (std::string& cell : split(line)) {
      char* end = nullptr;
      const double d = std::strtod(cell.c_str(), &end);
      if (!cell.empty() && end == cell.c_str() + cell.size()) {
        row.emplace_back(d);
      } else {
        row.emplace_back(std::move(cell));
      }
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

}  // namespace tplcodec
