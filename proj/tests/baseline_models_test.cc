#include <random>

#include "doctest.h"
#include "tplcodec/mbtree.h"
#include "tplcodec/media_io.h"
#include "tplcodec/transform.h"

using namespace tplcodec;

namespace {

CodecConfig Config(int gop, GopMode mode) {
  CodecConfig c;
  c.gop_length = gop;
  c.gop_mode = mode;
  c.search_range = 4;
  return c;
}

double SumC(const MbTreeFrame& f) {
  double s = 0.0;
  for (const MbTreeBlock& b : f.blocks) s += b.c;
  return s;
}

}  // namespace

TEST_CASE("mbtree rho") {
  CHECK(mbtree_rho(100, 40) == doctest::Approx(0.6));
  CHECK(mbtree_rho(100, 100) == 0.0);
  CHECK(mbtree_rho(100, 0) == 1.0);
  CHECK(mbtree_rho(100, 150) == 0.0);
  CHECK(mbtree_rho(0, 0) == 0.0);
}

TEST_CASE("mbtree propagation examples") {
  CHECK(mbtree_propagate(0, 100, 0.6) == doctest::Approx(60));
  CHECK(mbtree_propagate(40, 100, 0) == 0.0);
  CHECK(mbtree_propagate(50, 100, 1.0) == 150.0);
  CHECK(mbtree_quant_propagate(50, 100, 1.0, 20, 20) == 150.0);
  CHECK(mbtree_quant_propagate(50, 100, 1.0, 0, 20) == 0.0);
  CHECK(mbtree_quant_propagate(0, 100, 0.6, 20, 40) == doctest::Approx(30));
  CHECK(mbtree_quant_propagate(0, 100, 0.6, 80, 40) == doctest::Approx(60));  // factor clamps to 1
  CHECK(mbtree_quant_propagate(0, 100, 0.6, 80, 0) == doctest::Approx(60));
}

TEST_CASE("quant variant never exceeds the plain one") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1000.0);
  for (int i = 0; i < 500; ++i) {
    const double c = u(rng), s = u(rng), rho = u(rng) / 1000.0, d = u(rng), sig = u(rng);
    CHECK(mbtree_quant_propagate(c, s, rho, d, sig) <= mbtree_propagate(c, s, rho));
    CHECK(mbtree_quant_propagate(c, s, rho, d, sig) >= 0.0);
  }
}

TEST_CASE("static low-delay chain grows linearly") {
  const Sequence seq = synth_sequence(SynthKind::kStatic, 48, 32, 7);
  const CodecConfig c = Config(8, GopMode::kLowDelay);
  const GopPlan plan = build_gop_plan(6, c);
  const MbTree t = mbtree_pass(seq, plan, c, MbTreeVariant::kPlain);
  for (int d = 0; d <= 6; ++d) {
    const int k = 6 - d;
    for (const MbTreeBlock& b : t.frames[d].blocks) {
      CHECK(b.s_intra > 0.0);
      CHECK(b.c == doctest::Approx(k * b.s_intra).epsilon(1e-12));
    }
    CHECK(beta_mb_frame(t.frames[d]) == doctest::Approx(k).epsilon(1e-12));
  }
}

TEST_CASE("mbtree pass on a noisy moving clip") {
  const Sequence seq = synth_sequence(SynthKind::kNoisyShift, 64, 48, 9, {2, 1, 3, 4, 30.0});
  const CodecConfig c = Config(8, GopMode::kPyramid);
  const GopPlan plan = build_gop_plan(8, c);
  const MbTree t = mbtree_pass(seq, plan, c, MbTreeVariant::kPlain);
  REQUIRE(t.frames.size() == 9);
  CHECK(SumC(t.frames[plan.frames.back().display_index]) == 0.0);
  for (const FramePlan& fp : plan.frames) {
    for (const MbTreeBlock& b : t.frames[fp.display_index].blocks) {
      CHECK(b.rho >= 0.0);
      CHECK(b.rho <= 1.0);
      CHECK(b.s_inter >= 0.0);
      if (b.s_inter >= b.s_intra) CHECK(b.rho == 0.0);
      CHECK(b.c >= 0.0);
      CHECK(b.num_refs >= 1);
      // The SATD recorded for the chosen single reference matches a recomputation.
      if (b.mode == BlockMode::kSingle) {
        const PixelBlock src = seq[fp.display_index].block(b.bx * 16, b.by * 16);
        const PixelBlock pred = seq[b.ref[0]].block(b.bx * 16 + b.mv[0].x, b.by * 16 + b.mv[0].y);
        CHECK(b.s_inter == satd(src, pred));
      }
    }
  }
  CHECK(SumC(t.frames[0]) > 0.0);
  CHECK(beta_mb_frame(t.frames[8]) >= 0.0);
}

TEST_CASE("quant variant needs a flow pass and stays below plain") {
  const Sequence seq = synth_sequence(SynthKind::kNoisyShift, 48, 48, 5, {1, 1, 3, 6, 30.0});
  const CodecConfig c = Config(4, GopMode::kPyramid);
  const GopPlan plan = build_gop_plan(4, c);
  CHECK_THROWS(mbtree_pass(seq, plan, c, MbTreeVariant::kQuant, nullptr));
  const FlowPass flow = motion_flow_pass(seq, plan, 16.0, {}, c);
  const MbTree plain = mbtree_pass(seq, plan, c, MbTreeVariant::kPlain, &flow);
  const MbTree quant = mbtree_pass(seq, plan, c, MbTreeVariant::kQuant, &flow);
  for (int d = 0; d <= 4; ++d) {
    CHECK(SumC(quant.frames[d]) <= SumC(plain.frames[d]) + 1e-9);
    CHECK(beta_mb_frame(quant.frames[d]) <= beta_mb_frame(plain.frames[d]) + 1e-12);
  }
}

TEST_CASE("all-intra content propagates nothing") {
  // Flat frames alternating between black and white: intra DC is exact away
  // from the top-left block, inter is maximally wrong.
  Sequence seq;
  for (int n = 0; n < 4; ++n) {
    Frame f(32, 32);
    for (int y = 0; y < 32; ++y) {
      for (int x = 0; x < 32; ++x) f.at(x, y) = static_cast<uint8_t>(n % 2 ? 0 : 255);
    }
    seq.frames.push_back(f);
  }
  const CodecConfig c = Config(4, GopMode::kLowDelay);
  const GopPlan plan = build_gop_plan(3, c);
  const MbTree t = mbtree_pass(seq, plan, c, MbTreeVariant::kPlain);
  for (int d = 1; d <= 3; ++d) {
    for (const MbTreeBlock& b : t.frames[d].blocks) {
      if (b.bx == 0 && b.by == 0) continue;
      CHECK(b.rho == 0.0);
    }
  }
}

TEST_CASE("beta_mb_frame examples") {
  MbTreeFrame f{0, 2, 1, {}};
  MbTreeBlock a, b;
  a.s_intra = 60;
  b.s_intra = 40;
  f.blocks = {a, b};
  CHECK(beta_mb_frame(f) == 0.0);
  f.blocks[0].c = 200;
  f.blocks[1].c = 100;
  CHECK(beta_mb_frame(f) == 3.0);
  MbTreeFrame single{0, 1, 1, {a}};
  single.blocks[0].s_intra = 100;
  single.blocks[0].c = 60;
  CHECK(beta_mb_frame(single) == doctest::Approx(0.6));
  single.blocks[0].s_intra = 0;
  CHECK_THROWS(beta_mb_frame(single));
}

TEST_CASE("mbtree dump schema") {
  const Sequence seq = synth_sequence(SynthKind::kStatic, 32, 32, 3);
  const CodecConfig c = Config(2, GopMode::kPyramid);
  const GopPlan plan = build_gop_plan(2, c);
  CsvTable t = mbtree_dump_header();
  CHECK(t.header == std::vector<std::string>{"frame", "block_x", "block_y", "mode", "ref0", "mv0x",
                                             "mv0y", "S_intra", "S_inter", "rho", "C"});
  append_mbtree_dump(mbtree_pass(seq, plan, c, MbTreeVariant::kPlain), plan, 0, false, t);
  CHECK(t.rows.size() == 2 * 4);
}
