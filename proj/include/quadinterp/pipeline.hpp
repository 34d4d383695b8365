#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <utility>

#include "quadinterp/flow_estimator.hpp"
#include "quadinterp/qmotion.hpp"
#include "quadinterp/types.hpp"
#include "quadinterp/warp.hpp"

namespace quadinterp {

/// Supplies f(from -> to) between frames of one sequence, addressed by
/// sequence index.
class FlowSource {
 public:
  virtual ~FlowSource() = default;
  virtual FlowField flow(std::size_t from, std::size_t to) = 0;
};

/// Estimates flows on demand and memoizes them per (from, to) pair.
class EstimatedFlowSource final : public FlowSource {
 public:
  EstimatedFlowSource(std::span<const Frame> frames, FlowEstimatorConfig cfg);
  FlowField flow(std::size_t from, std::size_t to) override;

 private:
  std::span<const Frame> frames_;
  FlowEstimatorConfig cfg_;
  std::map<std::pair<std::size_t, std::size_t>, FlowField> cache_;
};

/// Wraps another source and returns its flows at half resolution.
class DownsampledFlowSource final : public FlowSource {
 public:
  explicit DownsampledFlowSource(FlowSource& base) : base_(base) {}
  FlowField flow(std::size_t from, std::size_t to) override;

 private:
  FlowSource& base_;
};

/// The interval (first, first + 1) of an input sequence. The outer
/// neighbours I(-1) = first - 1 and I(2) = first + 2 are used when present.
struct SequenceWindow {
  std::span<const Frame> frames;
  std::size_t first = 0;

  bool has_before() const { return first >= 1; }
  bool has_after() const { return first + 2 < frames.size(); }
  bool is_full() const { return has_before() && has_after(); }
  const Frame& frame0() const { return frames[first]; }
  const Frame& frame1() const { return frames[first + 1]; }
  void validate() const;
};

enum class MotionModel {
  /// Quadratic model; falls back to linear on boundary intervals.
  Quadratic,
  /// Constant velocity v0 = f(0->1), a = 0 everywhere.
  Linear,
};

struct PipelineConfig {
  MotionModel model = MotionModel::Quadratic;
  bool rectify = true;
  RectifierConfig rectifier;
  WarpConfig warp;
  /// Also warp the edge maps of both inputs (diagnostic output only).
  bool emit_edges = false;
};

struct WindowMotion {
  MotionField from_first;   ///< centred at I0, looking toward I1
  MotionField from_second;  ///< centred at I1, looking toward I0
};

/// Motion models for both anchors of the window. The I1-side model runs the
/// same fit over (I2, I0, I-1) as its (-1, +1, +2) neighbours.
WindowMotion estimate_window_motion(const SequenceWindow& window, FlowSource& flows,
                                    const PipelineConfig& cfg);

struct Interpolation {
  Frame frame;
  std::optional<Frame> edges0;  ///< warped edge map of I0, when requested
  std::optional<Frame> edges1;
};

/// Synthesizes the frame at time t from precomputed window motion:
/// predict f(0->t) and f(1->t), reverse both, backward-warp I0 and I1, blend.
Interpolation interpolate_from_motion(const SequenceWindow& window, const WindowMotion& motion,
                                      TimeFraction t, const PipelineConfig& cfg);

/// Single-scale interpolation of one window at time t.
Interpolation interpolate_window(const SequenceWindow& window, TimeFraction t, FlowSource& flows,
                                 const PipelineConfig& cfg);

}  // namespace quadinterp
