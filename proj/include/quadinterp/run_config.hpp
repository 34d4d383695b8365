#pragma once

#include <filesystem>
#include <string>

#include "quadinterp/flow_estimator.hpp"
#include "quadinterp/fusion.hpp"
#include "quadinterp/metrics.hpp"
#include "quadinterp/pipeline.hpp"

namespace quadinterp {

enum class FlowSourceKind {
  Estimate,
  /// Precomputed .flo files named <from>_<to>.flo after the frame stems.
  Files,
};

/// Everything a run needs. Loadable from JSON; CLI flags override fields.
struct RunConfig {
  Task task = Task::X4;
  FlowSourceKind flow_source = FlowSourceKind::Estimate;
  /// Root of the flow files; per-sequence subdirectories for datasets.
  std::filesystem::path flow_dir;
  FlowEstimatorConfig estimator;
  PipelineConfig pipeline;
  FusionConfig fusion;
  MetricConfig metrics;
  /// Worker threads; 0 defers to QUADINTERP_THREADS, then the core count.
  int threads = 0;

  void validate() const;
};

/// Applies the keys present in `text` on top of `base`.
///
/// {
///   "task": "x4",
///   "flow": {"source": "estimate", "dir": "", "pyramid_levels": 4,
///            "iterations_per_level": 3, "window_radius": 7, "regularization": 1e-4},
///   "motion": {"model": "quadratic", "rectify": true, "omega": 5, "gamma": 1,
///              "consistency": "pairwise-dot", "scope": "pixel"},
///   "warp": {"hole_fill": "outside-in", "splat": "bilinear", "sigma": 1,
///            "occlusion": "time-linear"},
///   "fusion": {"enabled": false, "mask": "agreement", "constant": 1, "lambda": 10},
///   "metrics": {"color": "rgb", "crop": 0},
///   "threads": 0
/// }
RunConfig run_config_from_json(const std::string& text, RunConfig base = {});
std::string run_config_to_json(const RunConfig& cfg);

/// Resolves 0 through QUADINTERP_THREADS and hardware_concurrency.
int resolve_thread_count(int requested);

// Name <-> enum helpers shared by the JSON loader and the CLI.
MotionModel parse_motion_model(const std::string& s);
ConsistencyRule parse_consistency_rule(const std::string& s);
ConsistencyScope parse_consistency_scope(const std::string& s);
HoleFill parse_hole_fill(const std::string& s);
SplatKernel parse_splat_kernel(const std::string& s);
OcclusionWeighting parse_occlusion(const std::string& s);
MaskKind parse_mask_kind(const std::string& s);
MetricColor parse_metric_color(const std::string& s);
FlowSourceKind parse_flow_source(const std::string& s);

}  // namespace quadinterp
