#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "quadinterp/flow_estimator.hpp"
#include "quadinterp/fusion.hpp"
#include "quadinterp/metrics.hpp"
#include "quadinterp/pipeline.hpp"
#include "quadinterp/types.hpp"

namespace quadinterp {

enum class PatternKind { GaussianBlob, BandLimitedNoise, Ramp };

/// A pattern translating along x(tau) = origin + v0 tau + a tau^2 / 2, with
/// tau measured in input-frame intervals.
struct SyntheticSceneSpec {
  int width = 256;
  int height = 256;
  int channels = 3;
  PatternKind pattern = PatternKind::GaussianBlob;
  double sigma = 8.0;       ///< blob radius, pixels
  double amplitude = 0.6;   ///< blob peak / noise RMS / ramp span above background
  std::uint64_t seed = 1;   ///< noise only
  double cutoff = 0.1;      ///< noise: highest spatial frequency, cycles per pixel
  std::optional<Vec2> origin;  ///< pattern position at tau = 0; image centre if unset
  Vec2 v0;
  Vec2 a;
  int frame_count = 4;
  double start_time = 0.0;  ///< tau of the first frame
  double background = 0.2;

  /// Throws ConfigError when a parameter is out of range or the trajectory
  /// leaves the margin (2 sigma for blobs, 8 px otherwise) during
  /// [start_time, start_time + frame_count - 1].
  void validate() const;
};

SyntheticSceneSpec scene_spec_from_json(const std::string& text);
std::string scene_spec_to_json(const SyntheticSceneSpec& spec);

/// Closed-form renderer: every frame is sampled from the continuous pattern,
/// never resampled from another frame.
class SyntheticScene {
 public:
  explicit SyntheticScene(SyntheticSceneSpec spec);

  const SyntheticSceneSpec& spec() const { return spec_; }
  Vec2 displacement(double tau) const;
  Frame render(double tau) const;
  /// The exact (spatially constant) flow between two times.
  FlowField flow(double from_tau, double to_tau) const;

 private:
  double pattern_value(double x, double y) const;

  SyntheticSceneSpec spec_;
  Vec2 origin_;
  struct Wave {
    double kx, ky, phase;
  };
  std::vector<Wave> waves_;
};

struct SyntheticSequence {
  SyntheticScene scene;
  /// Frames at tau = start_time + i.
  std::vector<Frame> frames;
  /// Exact f(0->-1), f(0->1), f(0->2) anchored at tau = 0.
  std::array<FlowField, 3> true_flows;

  Frame intermediate(double tau) const { return scene.render(tau); }
};

SyntheticSequence generate(const SyntheticSceneSpec& spec);

/// Flow source answering from the closed-form trajectory.
class SceneFlowSource final : public FlowSource {
 public:
  SceneFlowSource(const SyntheticScene& scene, std::vector<double> times)
      : scene_(scene), times_(std::move(times)) {}
  FlowField flow(std::size_t from, std::size_t to) override;

 private:
  const SyntheticScene& scene_;
  std::vector<double> times_;
};

struct EvaluationConfig {
  PipelineConfig pipeline;
  FusionConfig fusion;
  Task task = Task::X4;
  /// Use the exact scene flows instead of estimating them.
  bool true_flows = true;
  FlowEstimatorConfig estimator;
  MetricConfig metrics;
  /// Score the overlay baseline instead of the pipeline.
  bool overlay = false;
};

/// Interpolates every interval of the generated sequence at the task's
/// time fractions and scores against closed-form intermediates. Frame ids are
/// zero-padded ground-truth indices (interval * stride + step); the sequence
/// id is "synth".
MetricReport evaluate_pipeline(const SyntheticSceneSpec& spec, const EvaluationConfig& cfg);

}  // namespace quadinterp
