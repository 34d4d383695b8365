#include "quadinterp/pipeline.hpp"

#include <string>

#include "quadinterp/raster.hpp"

namespace quadinterp {

EstimatedFlowSource::EstimatedFlowSource(std::span<const Frame> frames, FlowEstimatorConfig cfg)
    : frames_(frames), cfg_(cfg) {
  cfg_.validate();
}

FlowField EstimatedFlowSource::flow(std::size_t from, std::size_t to) {
  if (from >= frames_.size() || to >= frames_.size()) {
    throw ConfigError("flow requested between frames " + std::to_string(from) + " and " +
                      std::to_string(to) + " of a " + std::to_string(frames_.size()) +
                      "-frame sequence");
  }
  const auto key = std::make_pair(from, to);
  if (auto it = cache_.find(key); it != cache_.end()) return it->second;
  FlowField f = estimate_flow(frames_[from], frames_[to], cfg_);
  cache_.emplace(key, f);
  return f;
}

FlowField DownsampledFlowSource::flow(std::size_t from, std::size_t to) {
  return downsample2(base_.flow(from, to));
}

void SequenceWindow::validate() const {
  if (first + 1 >= frames.size()) {
    throw ConfigError("window interval " + std::to_string(first) + " is outside a " +
                      std::to_string(frames.size()) + "-frame sequence");
  }
  const Frame& ref = frames[first];
  const std::size_t lo = has_before() ? first - 1 : first;
  const std::size_t hi = has_after() ? first + 2 : first + 1;
  for (std::size_t i = lo; i <= hi; ++i) require_same_shape(ref, frames[i], "sequence window");
}

namespace {

MotionField anchored_motion(FlowSource& flows, std::size_t anchor, std::size_t prev,
                            std::size_t next, std::size_t after_next, bool full,
                            const PipelineConfig& cfg) {
  const FlowField f1 = flows.flow(anchor, next);
  if (cfg.model == MotionModel::Linear || !full) return fit_linear(f1);
  const FlowField fm1 = flows.flow(anchor, prev);
  MotionField ori = fit_two_frame(fm1, f1);
  if (!cfg.rectify) return ori;
  const FlowField f2 = flows.flow(anchor, after_next);
  const MotionField lse = fit_lse(fm1, f1, f2);
  return rectify(ori, lse, accelerations(fm1, f1, f2), cfg.rectifier);
}

void check_flow_shape(const FlowField& f, const Frame& frame) {
  require_matches(f, frame, "window flow");
}

}  // namespace

WindowMotion estimate_window_motion(const SequenceWindow& window, FlowSource& flows,
                                    const PipelineConfig& cfg) {
  window.validate();
  const std::size_t k = window.first;
  const bool full = window.is_full();
  // Unused neighbour indices are never queried when !full.
  const std::size_t before = full ? k - 1 : k;
  const std::size_t after = full ? k + 2 : k + 1;
  WindowMotion motion{anchored_motion(flows, k, before, k + 1, after, full, cfg),
                      anchored_motion(flows, k + 1, after, k, before, full, cfg)};
  if (motion.from_first.width() != window.frame0().width() ||
      motion.from_first.height() != window.frame0().height()) {
    throw DimensionError("flow source returned flows that do not match the window frames");
  }
  return motion;
}

Interpolation interpolate_from_motion(const SequenceWindow& window, const WindowMotion& motion,
                                      TimeFraction t, const PipelineConfig& cfg) {
  const Frame& i0 = window.frame0();
  const Frame& i1 = window.frame1();
  const FlowField t_to_0 = reverse_flow(predict_flow(motion.from_first, t), cfg.warp);
  const FlowField t_to_1 = reverse_flow(predict_flow(motion.from_second, t.complement()), cfg.warp);
  check_flow_shape(t_to_0, i0);
  check_flow_shape(t_to_1, i1);

  Interpolation out{synthesize(backward_warp(i0, t_to_0), backward_warp(i1, t_to_1),
                               t_to_0.valid_mask(), t_to_1.valid_mask(), t, cfg.warp),
                    std::nullopt, std::nullopt};
  if (cfg.emit_edges) {
    out.edges0 = backward_warp(edge_map(i0), t_to_0);
    out.edges1 = backward_warp(edge_map(i1), t_to_1);
  }
  return out;
}

Interpolation interpolate_window(const SequenceWindow& window, TimeFraction t, FlowSource& flows,
                                 const PipelineConfig& cfg) {
  return interpolate_from_motion(window, estimate_window_motion(window, flows, cfg), t, cfg);
}

}  // namespace quadinterp
