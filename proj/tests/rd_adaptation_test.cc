#include <random>

#include "doctest.h"
#include "tplcodec/media_io.h"
#include "tplcodec/rd_adaptation.h"

using namespace tplcodec;

TEST_CASE("tpl alpha examples") {
  const TplBlockTerms zero[] = {{0, 0, 40}, {0, 0, 10}};
  CHECK(alpha_lcb_tpl(zero, 5.0, 9.0) == 0.0);
  const TplBlockTerms one[] = {{15, 0, 40}};
  CHECK(alpha_lcb_tpl(one, 5.0, 9.0) == 0.375);
  const TplBlockTerms with_rate[] = {{15, 2, 40}};
  CHECK(alpha_lcb_tpl(with_rate, 5.0, 9.0) == 0.625);
  CHECK(alpha_frame_tpl(with_rate, 5.0) == 0.625);
  // Two LCBs at 0.2 and 0.6 with equal distortion.
  const TplBlockTerms frame[] = {{8, 0, 40}, {24, 0, 40}};
  CHECK(alpha_frame_tpl(frame, 1.0) == doctest::Approx(0.4));
}

TEST_CASE("zero denominators") {
  const TplBlockTerms lossless[] = {{0, 0, 0}};
  TplDiagnostics diag;
  CHECK(alpha_lcb_tpl(lossless, 1.0, 0.7, &diag) == 0.7);
  CHECK(diag.zero_denominator == 1);
  CHECK_THROWS_AS(alpha_frame_tpl(lossless, 1.0), std::domain_error);
  const MbBlockTerms flat[] = {{5, 0}};
  CHECK(alpha_lcb_mbtree(flat, 0.3) == 0.3);
  CHECK_THROWS_AS(alpha_frame_mbtree(flat), std::domain_error);
}

TEST_CASE("mbtree alpha examples") {
  const MbBlockTerms zero[] = {{0, 100}, {0, 50}};
  CHECK(alpha_lcb_mbtree(zero, 1.0) == 0.0);
  const MbBlockTerms one[] = {{60, 100}};
  CHECK(alpha_lcb_mbtree(one, 1.0) == 0.6);
  CHECK(alpha_frame_mbtree(one) == 0.6);
}

TEST_CASE("scale_lambda examples and clamp") {
  CHECK(scale_lambda(100, 0.7, 0.7) == 100.0);
  CHECK(scale_lambda(100, 0, 1) == 50.0);
  CHECK(scale_lambda(100, 1, 0) == 200.0);
  CHECK(scale_lambda(100, 100, 0) == 800.0);
  CHECK(scale_lambda(100, 0, 100) == 12.5);
}

TEST_CASE("scale_lambda is bounded, monotone and order preserving") {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(0.0, 20.0);
  for (int i = 0; i < 1000; ++i) {
    const double ln = 1.0 + 100 * u(rng);
    const double fr = u(rng), a = u(rng), b = u(rng);
    const double la = scale_lambda(ln, fr, a);
    const double lb = scale_lambda(ln, fr, b);
    CHECK(la >= ln / 8);
    CHECK(la <= ln * 8);
    if (a > b) CHECK(la <= lb);
    // Strict inside the clamp range.
    const bool inside = la > ln / 8 && la < ln * 8 && lb > ln / 8 && lb < ln * 8;
    if (inside && a > b) CHECK(la < lb);
  }
}

TEST_CASE("lambda maps from fields") {
  CodecConfig c;
  c.gop_length = 2;
  c.base_qstep = 20.0;
  const GopPlan plan = build_gop_plan(2, c);  // frame 2 at level 0, frame 1 leaf

  // 3 x 3 blocks -> 2 x 2 LCBs, the right and bottom LCBs partial.
  std::vector<PropagationField> fields;
  for (int d = 0; d <= 2; ++d) {
    PropagationField f{d, 3, 3, std::vector<double>(9, 0.0), std::vector<double>(9, 10.0)};
    fields.push_back(f);
  }
  fields[2].numer[0] = 40.0;  // LCB (0, 0) holds blocks 0, 1, 3, 4
  fields[2].denom[8] = 0.0;   // LCB (1, 1) holds block 8 only

  TplDiagnostics diag;
  const auto maps = build_lambda_maps(fields, plan, c, false, &diag);
  REQUIRE(maps.size() == 2);
  CHECK(maps[0].display_index == 1);
  CHECK(maps[1].display_index == 2);

  const LambdaMap& leaf = maps[0];
  CHECK(leaf.cols == 2);
  CHECK(leaf.rows == 2);
  CHECK(leaf.lambda_n == doctest::Approx(0.85 * 400));
  for (double l : leaf.lambda_m) CHECK(l == leaf.lambda_n);

  const LambdaMap& arf = maps[1];
  const double q = 20.0 / std::sqrt(2.0);
  CHECK(arf.lambda_n == doctest::Approx(0.85 * q * q));
  CHECK(arf.alpha_fr == doctest::Approx(40.0 / 80.0));
  CHECK(arf.alpha_m[0] == doctest::Approx(1.0));
  CHECK(arf.alpha_m[1] == 0.0);
  CHECK(arf.alpha_m[3] == arf.alpha_fr);  // zero-denominator LCB
  CHECK(diag.zero_denominator == 1);
  CHECK(arf.lambda_m[0] == doctest::Approx(arf.lambda_n * 1.5 / 2.0));
  CHECK(arf.lambda_m[1] == doctest::Approx(arf.lambda_n * 1.5));
  CHECK(arf.lambda_m[3] == arf.lambda_n);

  const auto with_anchor = build_lambda_maps(fields, plan, c, true);
  CHECK(with_anchor.size() == 3);
  CHECK(with_anchor[0].lambda_n == doctest::Approx(0.85 * q * q));

  const LambdaMaps grids = to_lambda_maps(maps);
  CHECK(grids.at(2).at(1, 0) == arf.lambda_m[1]);
}

TEST_CASE("lossless frame gets neutral scaling") {
  CodecConfig c;
  c.gop_length = 1;
  const GopPlan plan = build_gop_plan(1, c);
  std::vector<PropagationField> fields = {
      {1, 2, 2, std::vector<double>(4, 3.0), std::vector<double>(4, 0.0)}};
  TplDiagnostics diag;
  const auto maps = build_lambda_maps(fields, plan, c, false, &diag);
  CHECK(maps[0].alpha_fr == 0.0);
  CHECK(maps[0].lambda_m[0] == maps[0].lambda_n);
  CHECK(diag.zero_denominator == 2);
}

TEST_CASE("constant alpha fields are exactly neutral") {
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> u(0.1, 50.0);
  CodecConfig c;
  c.gop_length = 4;
  const GopPlan plan = build_gop_plan(4, c);
  for (int t = 0; t < 50; ++t) {
    const double alpha = u(rng);
    std::vector<PropagationField> fields;
    for (int d = 0; d <= 4; ++d) {
      PropagationField f{d, 5, 3, {}, {}};
      for (int i = 0; i < 15; ++i) {
        const double den = u(rng);
        f.numer.push_back(alpha * den);
        f.denom.push_back(den);
      }
      fields.push_back(f);
    }
    for (const LambdaMap& m : build_lambda_maps(fields, plan, c, true)) {
      for (double l : m.lambda_m) CHECK(l == doctest::Approx(m.lambda_n).epsilon(1e-12));
    }
  }
}

TEST_CASE("fields from model passes line up with the block grid") {
  const Sequence seq = synth_sequence(SynthKind::kNoisyShift, 64, 48, 5, {1, 1, 3, 2, 30.0});
  CodecConfig c;
  c.gop_length = 4;
  c.search_range = 4;
  const GopPlan plan = build_gop_plan(4, c);
  const FlowPass flow = motion_flow_pass(seq, plan, 16.0, {}, c);
  const TplModel model = synthesize_dependency(flow);
  const auto tf = tpl_fields(flow, model);
  REQUIRE(tf.size() == 5);
  for (size_t d = 0; d < tf.size(); ++d) {
    CHECK(tf[d].cols == 4);
    CHECK(tf[d].rows == 3);
    for (size_t k = 0; k < tf[d].numer.size(); ++k) {
      const BlockFlowStats& b = flow.frames[d].blocks[k];
      CHECK(tf[d].numer[k] == model.grids[d].delta_d(b.bx, b.by) +
                                  flow.lambda * model.grids[d].delta_r(b.bx, b.by));
      CHECK(tf[d].denom[k] == b.d_rec);
    }
  }
  const MbTree tree = mbtree_pass(seq, plan, c, MbTreeVariant::kPlain);
  const auto mf = mbtree_fields(tree);
  CHECK(mf[0].numer[5] == tree.frames[0].blocks[5].c);
  CHECK(mf[0].denom[5] == tree.frames[0].blocks[5].s_intra);

  const auto a = build_lambda_maps(tf, plan, c, true);
  const auto b = build_lambda_maps(tf, plan, c, true);
  for (size_t i = 0; i < a.size(); ++i) CHECK(a[i].lambda_m == b[i].lambda_m);

  CsvTable dump = lambda_map_header();
  append_lambda_dump(a, 0, dump);
  CHECK(dump.header ==
        std::vector<std::string>{"frame", "lcb_x", "lcb_y", "alpha_m", "alpha_fr", "lambda_m"});
  CHECK(dump.rows.size() == 5 * 2 * 2);
}
