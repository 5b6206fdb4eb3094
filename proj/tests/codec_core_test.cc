#include <bit>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <numbers>
#include <random>

#include "doctest.h"
#include "tplcodec/encoder.h"
#include "tplcodec/media_io.h"
#include "tplcodec/prediction.h"
#include "tplcodec/transform.h"

using namespace tplcodec;

namespace {

// Direct O(N^4) orthonormal DCT-II.
Coeffs NaiveDct(const Coeffs& x) {
  Coeffs out{};
  const double pi = std::numbers::pi;
  for (int u = 0; u < 16; ++u) {
    for (int v = 0; v < 16; ++v) {
      const double cu = u == 0 ? std::sqrt(1.0 / 16) : std::sqrt(2.0 / 16);
      const double cv = v == 0 ? std::sqrt(1.0 / 16) : std::sqrt(2.0 / 16);
      double acc = 0.0;
      for (int r = 0; r < 16; ++r) {
        for (int c = 0; c < 16; ++c) {
          acc += x[r * 16 + c] * std::cos((2 * r + 1) * u * pi / 32) *
                 std::cos((2 * c + 1) * v * pi / 32);
        }
      }
      out[u * 16 + v] = cu * cv * acc;
    }
  }
  return out;
}

// Sum of |H D H| over 8x8 tiles with the Sylvester Hadamard matrix.
double NaiveSatd(const PixelBlock& a, const PixelBlock& b) {
  int h[8][8];
  for (int i = 0; i < 8; ++i) {
    for (int j = 0; j < 8; ++j) h[i][j] = (std::popcount(static_cast<unsigned>(i & j)) & 1) ? -1 : 1;
  }
  double total = 0.0;
  for (int ty = 0; ty < 16; ty += 8) {
    for (int tx = 0; tx < 16; tx += 8) {
      for (int i = 0; i < 8; ++i) {
        for (int j = 0; j < 8; ++j) {
          long acc = 0;
          for (int r = 0; r < 8; ++r) {
            for (int c = 0; c < 8; ++c) {
              const int k = (ty + r) * 16 + tx + c;
              acc += h[i][r] * (int{a[k]} - int{b[k]}) * h[c][j];
            }
          }
          total += std::abs(acc);
        }
      }
    }
  }
  return total;
}

PixelBlock RandomBlock(std::mt19937& rng) {
  PixelBlock b;
  for (auto& v : b) v = static_cast<uint8_t>(rng() & 0xFF);
  return b;
}

Frame RandomFrame(std::mt19937& rng, int w, int h) {
  Frame f(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) f.at(x, y) = static_cast<uint8_t>(rng() & 0xFF);
  }
  return f;
}

}  // namespace

TEST_CASE("dct matches the direct formula and round-trips") {
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> dist(-255.0, 255.0);
  for (int t = 0; t < 5; ++t) {
    Coeffs x;
    for (double& v : x) v = dist(rng);
    const Coeffs fast = dct16_forward(x);
    const Coeffs slow = NaiveDct(x);
    double energy_x = 0.0, energy_c = 0.0;
    for (int i = 0; i < kBlockArea; ++i) {
      CHECK(fast[i] == doctest::Approx(slow[i]).epsilon(1e-9).scale(255));
      energy_x += x[i] * x[i];
      energy_c += fast[i] * fast[i];
    }
    CHECK(energy_c == doctest::Approx(energy_x).epsilon(1e-12));
    const Coeffs back = dct16_inverse(fast);
    for (int i = 0; i < kBlockArea; ++i) CHECK(std::abs(back[i] - x[i]) <= 1e-6);
  }
}

TEST_CASE("dct of a constant block is pure DC") {
  Coeffs x;
  x.fill(16.0);
  const Coeffs c = dct16_forward(x);
  CHECK(c[0] == doctest::Approx(256.0));
  for (int i = 1; i < kBlockArea; ++i) CHECK(std::abs(c[i]) < 1e-9);
  Coeffs dc{};
  dc[0] = 256.0;
  for (double v : dct16_inverse(dc)) CHECK(v == doctest::Approx(16.0));
}

TEST_CASE("quantizer rounds half away from zero and stays within half a step") {
  CHECK(quantize(24.0, 16.0) == 2);
  CHECK(quantize(-24.0, 16.0) == -2);
  CHECK(quantize(7.99, 16.0) == 0);
  CHECK(dequantize(-3, 10.0) == -30.0);
  CHECK_THROWS(quantize(1.0, 0.0));
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> dist(-5000.0, 5000.0);
  for (int i = 0; i < 1000; ++i) {
    const double q = 1.0 + (rng() % 60);
    const double c = dist(rng);
    CHECK(std::abs(dequantize(quantize(c, q), q) - c) <= q / 2 + 1e-12);
  }
}

TEST_CASE("signed exp-golomb lengths") {
  CHECK(se_bits(0) == 1);
  CHECK(se_bits(1) == 3);
  CHECK(se_bits(-1) == 3);
  CHECK(se_bits(2) == 5);
  CHECK(se_bits(-3) == 5);
  CHECK(se_bits(4) == 7);
  // Code length of codeNum k is 2 floor(log2(k + 1)) + 1 with k = 2|v| - (v > 0).
  for (int v = -300; v <= 300; ++v) {
    const long k = v > 0 ? 2L * v - 1 : -2L * v;
    CHECK(se_bits(v) == 2 * static_cast<int>(std::floor(std::log2(k + 1.0))) + 1);
  }
}

TEST_CASE("block bit counts") {
  Levels zero{};
  CHECK(block_bits(zero) == 256);
  Levels one{};
  one[17] = 1;
  CHECK(block_bits(one) == 258);
  CHECK(block_bits(zero, MotionVector{0, 0}) == 258);
  CHECK(block_bits(zero, MotionVector{-1, 2}) == 256 + 3 + 5);
}

TEST_CASE("sse and satd against direct evaluation") {
  std::mt19937 rng(9);
  for (int t = 0; t < 20; ++t) {
    const PixelBlock a = RandomBlock(rng);
    const PixelBlock b = RandomBlock(rng);
    double s = 0.0;
    for (int i = 0; i < kBlockArea; ++i) s += (int{a[i]} - int{b[i]}) * (int{a[i]} - int{b[i]});
    CHECK(sse(a, b) == s);
    CHECK(satd(a, b) == NaiveSatd(a, b));
  }
  PixelBlock a{};
  CHECK(satd(a, a) == 0.0);
  std::vector<uint8_t> odd(12 * 8);
  CHECK_THROWS(satd(odd, odd, 12));
  CHECK_THROWS(sse(std::span<const uint8_t>(odd).first(5), odd));
}

TEST_CASE("motion search never loses to the brute-force oracle") {
  std::mt19937 rng(11);
  for (int t = 0; t < 100; ++t) {
    const Frame ref = RandomFrame(rng, 64, 48);
    Frame cur = RandomFrame(rng, 64, 48);
    const int bx = static_cast<int>(rng() % 4) * 16;
    const int by = static_cast<int>(rng() % 3) * 16;
    // Plant the block somewhere in the reference half of the time.
    if (t % 2 == 0) {
      const int sx = static_cast<int>(rng() % 49), sy = static_cast<int>(rng() % 33);
      cur.set_block(bx, by, ref.block(sx, sy));
    }
    const int range = 1 + static_cast<int>(rng() % 12);
    const MotionResult got = motion_search(cur, bx, by, ref, {0, 0}, range);

    int64_t best = std::numeric_limits<int64_t>::max();
    for (int my = -range; my <= range; ++my) {
      for (int mx = -range; mx <= range; ++mx) {
        if (bx + mx < 0 || by + my < 0 || bx + mx + 16 > 64 || by + my + 16 > 48) continue;
        int64_t sad = 0;
        for (int r = 0; r < 16; ++r) {
          for (int c = 0; c < 16; ++c) {
            sad += std::abs(cur.at(bx + c, by + r) - ref.at(bx + mx + c, by + my + r));
          }
        }
        best = std::min(best, sad);
      }
    }
    CHECK(got.sad <= best);
    CHECK(got.sad == block_sad(cur, bx, by, ref, got.mv));
    CHECK(std::abs(got.mv.x) <= range);
    CHECK(std::abs(got.mv.y) <= range);
  }
}

TEST_CASE("motion search breaks ties toward the shortest vector") {
  const Frame flat(48, 48, 90);
  const MotionResult r = motion_search(flat, 16, 16, flat, {0, 0}, 8);
  CHECK(r.mv == MotionVector{0, 0});
  CHECK(r.sad == 0);
}

TEST_CASE("motion search finds a pure translation") {
  const Sequence seq = synth_sequence(SynthKind::kShift, 64, 64, 2, {3, -2, 0, 1, 30.0});
  const MotionResult r = motion_search(seq[1], 32, 32, seq[0], {0, 0}, 8);
  CHECK(r.mv == MotionVector{-3, 2});
  CHECK(r.sad == 0);
}

TEST_CASE("compound prediction rounds the average up") {
  PixelBlock a, b;
  a.fill(3);
  b.fill(4);
  CHECK(predict_compound(a, b)[0] == 4);
  b.fill(5);
  CHECK(predict_compound(a, b)[7] == 4);
  a.fill(255);
  b.fill(255);
  CHECK(predict_compound(a, b)[0] == 255);
}

TEST_CASE("intra dc prediction") {
  Frame f(48, 48, 0);
  CHECK(predict_intra_dc(f, 0, 0)[0] == 128);
  for (int x = 0; x < 48; ++x) f.at(x, 15) = 10;  // row above block (16, 16)
  for (int y = 0; y < 48; ++y) f.at(15, y) = 21;  // column left of it
  CHECK(predict_intra_dc(f, 16, 0)[0] == 21);
  // The column overwrote (15, 15), so the row above (0, 16) is 15 x 10 + 21.
  CHECK(predict_intra_dc(f, 0, 16)[0] == (15 * 10 + 21 + 8) / 16);
  CHECK(predict_intra_dc(f, 16, 16)[0] == (16 * 10 + 16 * 21 + 16) / 32);
}

TEST_CASE("code_block basics") {
  std::mt19937 rng(13);
  const PixelBlock cur = RandomBlock(rng);
  const CodedBlock exact = code_block(cur, cur, 8.0);
  CHECK(exact.rd.distortion == 0.0);
  CHECK(exact.rd.rate == 256.0);
  const MotionVector mv{0, 0};
  CHECK(code_block(cur, cur, 8.0, std::span(&mv, 1)).rd.rate == 258.0);

  // Quantization error is bounded by the transform-domain half step.
  for (double q : {1.0, 4.0, 16.0, 40.0}) {
    PixelBlock pred;
    pred.fill(128);
    const CodedBlock cb = code_block(cur, pred, q);
    CHECK(cb.rd.distortion == sse(cur, cb.recon));
    CHECK(cb.rd.distortion <= sse(cur, pred) + 1e-9);
    CHECK(cb.rd.rate >= 256.0);
  }
  CHECK_THROWS(code_block(cur, cur, 0.0));
}

TEST_CASE("psnr") {
  CHECK(psnr(255.0 * 255.0) == 0.0);
  CHECK(psnr(0.0) == kPsnrCap);
  CHECK(psnr(1.0) == doctest::Approx(48.1308036087));
}

TEST_CASE("encode_frame is deterministic and intra-only without references") {
  const Sequence seq = synth_sequence(SynthKind::kNoisyShift, 64, 48, 2, {1, 1, 2, 3, 30.0});
  FramePlan plan{1, 0, 0, 12.0, {0}, true};
  const Frame* refs[] = {&seq[0]};
  const LambdaGrid lambdas = LambdaGrid::Uniform(seq[1], 0.85 * 144);
  const FrameEncodeResult a = encode_frame(seq[1], plan, refs, lambdas, 8);
  const FrameEncodeResult b = encode_frame(seq[1], plan, refs, lambdas, 8);
  CHECK(a.recon == b.recon);
  CHECK(a.report.bits == b.report.bits);
  CHECK(a.report.blocks == b.report.blocks);
  CHECK(a.report.sse == frame_sse(seq[1], a.recon));
  double bits = 0.0;
  for (const BlockDecision& d : a.report.blocks) bits += d.rd.rate;
  CHECK(a.report.bits == bits);

  FramePlan intra{0, 0, 0, 12.0, {}, false};
  const FrameEncodeResult i = encode_frame(seq[0], intra, {}, lambdas, 8);
  for (const BlockDecision& d : i.report.blocks) CHECK(d.mode == BlockMode::kIntra);

  CHECK_THROWS(encode_frame(seq[1], plan, {}, lambdas, 8));
  CHECK_THROWS(encode_frame(seq[1], plan, refs, LambdaGrid{1, 1, {1.0}}, 8));
}

TEST_CASE("encode_frame mode decision follows lambda") {
  const Sequence seq = synth_sequence(SynthKind::kShift, 64, 64, 2, {1, 0, 0, 1, 30.0});
  FramePlan plan{1, 0, 0, 4.0, {0}, true};
  const Frame* refs[] = {&seq[0]};
  const FrameEncodeResult r =
      encode_frame(seq[1], plan, refs, LambdaGrid::Uniform(seq[1], 0.85 * 16), 8);
  int inter = 0;
  for (const BlockDecision& d : r.report.blocks) {
    if (d.mode != BlockMode::kIntra) {
      ++inter;
      CHECK(d.ref[0] == 0);
    }
    CHECK(d.rd.cost(0.85 * 16) >= 0.0);
  }
  // A pure one-pixel shift is predicted exactly away from the left edge.
  CHECK(inter >= 12);
}
