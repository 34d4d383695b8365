#include "json.hpp"
#include "quadinterp/synthbench.hpp"
#include "support.hpp"

using namespace quadinterp;

namespace {

SyntheticSceneSpec blob_spec() {
  SyntheticSceneSpec s;
  s.width = 96;
  s.height = 80;
  s.sigma = 6.0;
  return s;
}

}  // namespace

TEST(SyntheticScene, BlobRendersClosedForm) {
  SyntheticSceneSpec s = blob_spec();
  s.origin = Vec2{30.0, 40.0};
  s.v0 = {2.0, 1.0};
  s.a = {1.0, -0.5};
  const SyntheticScene scene(s);
  const double tau = 2.0;
  const Vec2 c{30.0 + 2.0 * 2.0 + 0.5 * 4.0 * 1.0, 40.0 + 2.0 * 1.0 + 0.5 * 4.0 * -0.5};
  EXPECT_EQ(scene.displacement(tau), (c - Vec2{30.0, 40.0}));
  const Frame f = scene.render(tau);
  const double gains[3] = {1.0, 0.85, 0.7};
  for (auto [x, y] : {std::pair{36, 41}, std::pair{40, 45}, std::pair{0, 0}, std::pair{50, 30}})
    for (int ch = 0; ch < 3; ++ch) {
      const double r2 = (x - c.x) * (x - c.x) + (y - c.y) * (y - c.y);
      EXPECT_NEAR(f.at(x, y, ch), 0.2 + gains[ch] * 0.6 * std::exp(-r2 / 72.0), 1e-14);
    }
}

TEST(SyntheticScene, DefaultOriginIsTheImageCentre) {
  SyntheticSceneSpec s = blob_spec();
  s.width = 31;
  s.height = 21;
  s.sigma = 2.0;
  s.channels = 1;
  const Frame f = SyntheticScene(s).render(0.0);
  EXPECT_NEAR(f.at(15, 10, 0), 0.8, 1e-15);
  EXPECT_EQ(f.at(14, 10, 0), f.at(16, 10, 0));
}

TEST(SyntheticScene, FlowIsTrajectoryDifference) {
  SyntheticSceneSpec s = blob_spec();
  s.v0 = {1.5, 0.0};
  s.a = {2.0, 1.0};
  s.start_time = -1.0;
  const SyntheticSequence seq = generate(s);
  EXPECT_EQ(seq.frames.size(), 4u);
  EXPECT_EQ(seq.true_flows[0].at(3, 3), (Vec2{-1.5 + 1.0, 0.5}));
  EXPECT_EQ(seq.true_flows[1].at(3, 3), (Vec2{1.5 + 1.0, 0.5}));
  EXPECT_EQ(seq.true_flows[2].at(3, 3), (Vec2{3.0 + 4.0, 2.0}));
  EXPECT_EQ(seq.frames[1], seq.scene.render(0.0));
  EXPECT_EQ(seq.intermediate(0.5), seq.scene.render(0.5));
  SceneFlowSource src(seq.scene, {-1.0, 0.0, 1.0, 2.0});
  EXPECT_EQ(src.flow(1, 3), seq.true_flows[2]);
  EXPECT_THROW(src.flow(0, 4), ConfigError);
}

TEST(SyntheticScene, TranslationShiftsContent) {
  SyntheticSceneSpec s = blob_spec();
  s.pattern = PatternKind::BandLimitedNoise;
  s.v0 = {3.0, -2.0};
  s.frame_count = 2;
  const SyntheticSequence seq = generate(s);
  for (int y = 10; y < 60; ++y)
    for (int x = 10; x < 80; ++x)
      for (int c = 0; c < 3; ++c) EXPECT_NEAR(seq.frames[1].at(x + 3, y - 2, c), seq.frames[0].at(x, y, c), 1e-12);
}

TEST(SyntheticScene, NoiseIsDeterministicPerSeed) {
  SyntheticSceneSpec s = blob_spec();
  s.pattern = PatternKind::BandLimitedNoise;
  EXPECT_EQ(generate(s).frames, generate(s).frames);
  SyntheticSceneSpec other = s;
  other.seed = 2;
  EXPECT_NE(generate(s).frames[0], generate(other).frames[0]);
}

TEST(SyntheticScene, NoiseRmsMatchesAmplitude) {
  SyntheticSceneSpec s = blob_spec();
  s.width = s.height = 256;
  s.pattern = PatternKind::BandLimitedNoise;
  s.channels = 1;
  s.amplitude = 0.1;
  s.background = 0.5;
  const Frame f = SyntheticScene(s).render(0.0);
  double sq = 0.0;
  for (double v : f.data()) sq += (v - 0.5) * (v - 0.5);
  EXPECT_NEAR(std::sqrt(sq / f.data().size()), 0.1, 0.03);
}

TEST(SyntheticSceneSpec, MarginValidation) {
  SyntheticSceneSpec s = blob_spec();
  s.v0 = {30.0, 0.0};
  s.frame_count = 3;
  EXPECT_THROW(s.validate(), ConfigError);
  s.v0 = {};
  s.a = {0.0, 20.0};
  EXPECT_THROW(SyntheticScene{s}, ConfigError);
  // A parabola whose vertex pokes outside while the endpoints stay inside.
  s.a = {-4.0, 0.0};
  s.v0 = {8.0, 0.0};
  s.origin = Vec2{78.0, 40.0};
  s.frame_count = 5;
  EXPECT_THROW(s.validate(), ConfigError);
  s = blob_spec();
  s.channels = 2;
  EXPECT_THROW(s.validate(), ConfigError);
  s = blob_spec();
  s.pattern = PatternKind::BandLimitedNoise;
  s.cutoff = 0.6;
  EXPECT_THROW(s.validate(), ConfigError);
  s = blob_spec();
  s.sigma = 0.0;
  EXPECT_THROW(s.validate(), ConfigError);
  EXPECT_NO_THROW(blob_spec().validate());
}

TEST(SyntheticSceneSpec, JsonRoundTrip) {
  SyntheticSceneSpec s = blob_spec();
  s.pattern = PatternKind::Ramp;
  s.origin = Vec2{40.0, 35.0};
  s.v0 = {1.25, -0.5};
  s.a = {0.5, 0.25};
  s.seed = 99;
  s.frame_count = 6;
  s.start_time = -1.0;
  const SyntheticSceneSpec back = scene_spec_from_json(scene_spec_to_json(s));
  EXPECT_EQ(scene_spec_to_json(back), scene_spec_to_json(s));
  EXPECT_EQ(back.pattern, PatternKind::Ramp);
  EXPECT_EQ(back.origin, s.origin);
  EXPECT_EQ(back.v0, s.v0);
  EXPECT_EQ(back.seed, 99u);
}

TEST(SyntheticSceneSpec, JsonDefaultsAndErrors) {
  const SyntheticSceneSpec d = scene_spec_from_json("{}");
  EXPECT_EQ(d.width, 256);
  EXPECT_EQ(d.pattern, PatternKind::GaussianBlob);
  EXPECT_FALSE(d.origin.has_value());
  EXPECT_THROW(scene_spec_from_json("{"), FormatError);
  EXPECT_THROW(scene_spec_from_json(R"({"width": "wide"})"), FormatError);
  EXPECT_THROW(scene_spec_from_json(R"({"pattern": "stripes"})"), ConfigError);
  EXPECT_THROW(scene_spec_from_json(R"({"v0": [1]})"), ConfigError);
  EXPECT_THROW(scene_spec_from_json(R"({"v0": [500, 0]})"), ConfigError);
}

TEST(EvaluatePipeline, StaticSceneIsPerfect) {
  SyntheticSceneSpec s = blob_spec();
  s.frame_count = 3;
  EvaluationConfig cfg;
  const MetricReport r = evaluate_pipeline(s, cfg);
  ASSERT_EQ(r.per_frame.size(), 6u);
  EXPECT_EQ(r.per_frame[0].frame, "00000001");
  EXPECT_EQ(r.per_frame[3].frame, "00000005");
  EXPECT_EQ(r.per_frame[5].frame, "00000007");
  EXPECT_EQ(r.per_frame[0].sequence, "synth");
  for (const FrameScore& f : r.per_frame) {
    EXPECT_EQ(f.psnr_db, 99.0);
    EXPECT_NEAR(f.ssim, 1.0, 1e-9);
  }
  cfg.task = Task::X2;
  EXPECT_EQ(evaluate_pipeline(s, cfg).per_frame.size(), 2u);
}

TEST(EvaluatePipeline, QuadraticBeatsLinearOnAcceleratingBlob) {
  SyntheticSceneSpec s = blob_spec();
  s.origin = Vec2{20.0, 40.0};
  s.v0 = {4.0, 0.0};
  s.a = {3.0, 0.0};
  s.start_time = -1.0;
  s.frame_count = 4;
  EvaluationConfig quad, lin;
  lin.pipeline.model = MotionModel::Linear;
  const MetricReport rq = evaluate_pipeline(s, quad);
  const MetricReport rl = evaluate_pipeline(s, lin);
  // The middle interval is the only one with both outer neighbours.
  for (const std::string id : {"00000005", "00000006", "00000007"}) {
    auto find = [&](const MetricReport& r) {
      for (const FrameScore& f : r.per_frame)
        if (f.frame == id) return f.psnr_db;
      return -1.0;
    };
    EXPECT_GT(find(rq), find(rl) + 3.0) << id;
  }
}

TEST(EvaluatePipeline, OverlayAndEstimatedFlows) {
  SyntheticSceneSpec s = blob_spec();
  s.origin = Vec2{40.0, 40.0};
  s.v0 = {3.0, 0.0};
  s.frame_count = 3;
  EvaluationConfig cfg;
  cfg.task = Task::X2;
  EvaluationConfig overlay = cfg;
  overlay.overlay = true;
  const double exact = evaluate_pipeline(s, cfg).mean_psnr_db;
  const double base = evaluate_pipeline(s, overlay).mean_psnr_db;
  EXPECT_GT(exact, base);
  EvaluationConfig est = cfg;
  est.true_flows = false;
  const MetricReport r = evaluate_pipeline(s, est);
  EXPECT_GT(r.mean_psnr_db, base);
  EXPECT_GE(r.runtime_per_frame_s, 0.0);
  s.frame_count = 1;
  EXPECT_THROW(evaluate_pipeline(s, cfg), ConfigError);
}

TEST(EvaluatePipeline, FusionPathRuns) {
  SyntheticSceneSpec s = blob_spec();
  s.frame_count = 2;
  EvaluationConfig cfg;
  cfg.task = Task::X2;
  cfg.fusion.enabled = true;
  const MetricReport r = evaluate_pipeline(s, cfg);
  ASSERT_EQ(r.per_frame.size(), 1u);
  EXPECT_GT(r.per_frame[0].psnr_db, 60.0);
}
