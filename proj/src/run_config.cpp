#include "quadinterp/run_config.hpp"

#include <algorithm>
#include <cstdlib>
#include <thread>

#include "json.hpp"

namespace quadinterp {

namespace {

template <typename Enum>
struct Names {
  Enum value;
  const char* name;
};

template <typename Enum, std::size_t N>
Enum lookup(const std::string& s, const Names<Enum> (&table)[N], const char* what) {
  std::string options;
  for (const auto& entry : table) {
    if (s == entry.name) return entry.value;
    options += options.empty() ? entry.name : std::string(", ") + entry.name;
  }
  throw ConfigError("unknown " + std::string(what) + " '" + s + "' (expected one of: " + options + ")");
}

template <typename Enum, std::size_t N>
const char* name_of(Enum v, const Names<Enum> (&table)[N]) {
  for (const auto& entry : table)
    if (entry.value == v) return entry.name;
  return table[0].name;
}

constexpr Names<MotionModel> kModels[] = {{MotionModel::Quadratic, "quadratic"}, {MotionModel::Linear, "linear"}};
constexpr Names<ConsistencyRule> kRules[] = {{ConsistencyRule::PairwiseDot, "pairwise-dot"},
                                             {ConsistencyRule::ComponentSign, "component-sign"}};
constexpr Names<ConsistencyScope> kScopes[] = {{ConsistencyScope::PerPixel, "pixel"},
                                               {ConsistencyScope::PerFrame, "frame"}};
constexpr Names<HoleFill> kFills[] = {{HoleFill::OutsideInAverage, "outside-in"}, {HoleFill::NearestValid, "nearest"}};
constexpr Names<SplatKernel> kKernels[] = {{SplatKernel::Bilinear, "bilinear"}, {SplatKernel::Gaussian, "gaussian"}};
constexpr Names<OcclusionWeighting> kOcclusions[] = {{OcclusionWeighting::TimeLinear, "time-linear"},
                                                     {OcclusionWeighting::HoleMaskScaled, "hole-mask"}};
constexpr Names<MaskKind> kMasks[] = {{MaskKind::Constant, "constant"}, {MaskKind::Agreement, "agreement"}};
constexpr Names<MetricColor> kColors[] = {{MetricColor::Rgb, "rgb"}, {MetricColor::Luma, "luma"}};
constexpr Names<FlowSourceKind> kSources[] = {{FlowSourceKind::Estimate, "estimate"}, {FlowSourceKind::Files, "files"}};

template <typename T>
void read_if(const nlohmann::json& obj, const char* key, T& out) {
  if (obj.contains(key)) out = obj.at(key).get<T>();
}

}  // namespace

MotionModel parse_motion_model(const std::string& s) { return lookup(s, kModels, "motion model"); }
ConsistencyRule parse_consistency_rule(const std::string& s) { return lookup(s, kRules, "consistency rule"); }
ConsistencyScope parse_consistency_scope(const std::string& s) { return lookup(s, kScopes, "consistency scope"); }
HoleFill parse_hole_fill(const std::string& s) { return lookup(s, kFills, "hole fill"); }
SplatKernel parse_splat_kernel(const std::string& s) { return lookup(s, kKernels, "splat kernel"); }
OcclusionWeighting parse_occlusion(const std::string& s) { return lookup(s, kOcclusions, "occlusion weighting"); }
MaskKind parse_mask_kind(const std::string& s) { return lookup(s, kMasks, "fusion mask"); }
MetricColor parse_metric_color(const std::string& s) { return lookup(s, kColors, "metric color"); }
FlowSourceKind parse_flow_source(const std::string& s) { return lookup(s, kSources, "flow source"); }

void RunConfig::validate() const {
  estimator.validate();
  pipeline.rectifier.validate();
  pipeline.warp.validate();
  make_mask_provider(fusion);
  if (metrics.border_crop < 0) throw ConfigError("metric border crop must be nonnegative");
  if (threads < 0) throw ConfigError("thread count must be nonnegative");
  if (flow_source == FlowSourceKind::Files) {
    if (flow_dir.empty()) throw ConfigError("flow source 'files' needs a flow directory");
    if (!std::filesystem::is_directory(flow_dir)) {
      throw ConfigError("flow directory does not exist: " + flow_dir.string());
    }
  }
}

RunConfig run_config_from_json(const std::string& text, RunConfig cfg) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("run config is not valid JSON: ") + e.what());
  }
  try {
    if (j.contains("task")) cfg.task = parse_task(j["task"].get<std::string>());
    if (j.contains("flow")) {
      const auto& f = j["flow"];
      if (f.contains("source")) cfg.flow_source = parse_flow_source(f["source"].get<std::string>());
      if (f.contains("dir")) cfg.flow_dir = f["dir"].get<std::string>();
      read_if(f, "pyramid_levels", cfg.estimator.pyramid_levels);
      read_if(f, "iterations_per_level", cfg.estimator.iterations_per_level);
      read_if(f, "window_radius", cfg.estimator.window_radius);
      read_if(f, "regularization", cfg.estimator.regularization);
    }
    if (j.contains("motion")) {
      const auto& m = j["motion"];
      if (m.contains("model")) cfg.pipeline.model = parse_motion_model(m["model"].get<std::string>());
      read_if(m, "rectify", cfg.pipeline.rectify);
      read_if(m, "omega", cfg.pipeline.rectifier.omega);
      read_if(m, "gamma", cfg.pipeline.rectifier.gamma);
      if (m.contains("consistency")) cfg.pipeline.rectifier.rule = parse_consistency_rule(m["consistency"].get<std::string>());
      if (m.contains("scope")) cfg.pipeline.rectifier.scope = parse_consistency_scope(m["scope"].get<std::string>());
    }
    if (j.contains("warp")) {
      const auto& w = j["warp"];
      if (w.contains("hole_fill")) cfg.pipeline.warp.hole_fill = parse_hole_fill(w["hole_fill"].get<std::string>());
      if (w.contains("splat")) cfg.pipeline.warp.splat_kernel = parse_splat_kernel(w["splat"].get<std::string>());
      read_if(w, "sigma", cfg.pipeline.warp.gaussian_sigma);
      if (w.contains("occlusion")) cfg.pipeline.warp.occlusion_weighting = parse_occlusion(w["occlusion"].get<std::string>());
    }
    if (j.contains("fusion")) {
      const auto& f = j["fusion"];
      read_if(f, "enabled", cfg.fusion.enabled);
      if (f.contains("mask")) cfg.fusion.kind = parse_mask_kind(f["mask"].get<std::string>());
      read_if(f, "constant", cfg.fusion.constant);
      read_if(f, "lambda", cfg.fusion.lambda);
    }
    if (j.contains("metrics")) {
      const auto& m = j["metrics"];
      if (m.contains("color")) cfg.metrics.color = parse_metric_color(m["color"].get<std::string>());
      read_if(m, "crop", cfg.metrics.border_crop);
    }
    read_if(j, "threads", cfg.threads);
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("run config has a field of the wrong type: ") + e.what());
  }
  return cfg;
}

std::string run_config_to_json(const RunConfig& cfg) {
  nlohmann::ordered_json j;
  j["task"] = task_name(cfg.task);
  j["flow"] = {{"source", name_of(cfg.flow_source, kSources)},
               {"dir", cfg.flow_dir.string()},
               {"pyramid_levels", cfg.estimator.pyramid_levels},
               {"iterations_per_level", cfg.estimator.iterations_per_level},
               {"window_radius", cfg.estimator.window_radius},
               {"regularization", cfg.estimator.regularization}};
  j["motion"] = {{"model", name_of(cfg.pipeline.model, kModels)},
                 {"rectify", cfg.pipeline.rectify},
                 {"omega", cfg.pipeline.rectifier.omega},
                 {"gamma", cfg.pipeline.rectifier.gamma},
                 {"consistency", name_of(cfg.pipeline.rectifier.rule, kRules)},
                 {"scope", name_of(cfg.pipeline.rectifier.scope, kScopes)}};
  j["warp"] = {{"hole_fill", name_of(cfg.pipeline.warp.hole_fill, kFills)},
               {"splat", name_of(cfg.pipeline.warp.splat_kernel, kKernels)},
               {"sigma", cfg.pipeline.warp.gaussian_sigma},
               {"occlusion", name_of(cfg.pipeline.warp.occlusion_weighting, kOcclusions)}};
  j["fusion"] = {{"enabled", cfg.fusion.enabled},
                 {"mask", name_of(cfg.fusion.kind, kMasks)},
                 {"constant", cfg.fusion.constant},
                 {"lambda", cfg.fusion.lambda}};
  j["metrics"] = {{"color", name_of(cfg.metrics.color, kColors)}, {"crop", cfg.metrics.border_crop}};
  j["threads"] = cfg.threads;
  return j.dump(2);
}

int resolve_thread_count(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("QUADINTERP_THREADS")) {
    char* end = nullptr;
    const long n = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && n > 0) return static_cast<int>(n);
    throw ConfigError(std::string("QUADINTERP_THREADS must be a positive integer, got '") + env + "'");
  }
  return static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
}

}  // namespace quadinterp
