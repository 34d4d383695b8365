// Command-line front end: interpolate, benchmark, synth, flow estimate/convert.

#include <fmt/format.h>

#include <cmath>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "quadinterp/dataset.hpp"
#include "quadinterp/flow_estimator.hpp"
#include "quadinterp/flow_io.hpp"
#include "quadinterp/image_io.hpp"
#include "quadinterp/run_config.hpp"
#include "quadinterp/synthbench.hpp"

namespace fs = std::filesystem;
using namespace quadinterp;

namespace {

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Flags left unset keep the value from the config file (or the default).
struct EstimatorFlags {
  std::optional<int> levels, iterations, window_radius;
  std::optional<double> regularization;

  void attach(CLI::App* app) {
    app->add_option("--levels", levels, "Flow pyramid levels");
    app->add_option("--iterations", iterations, "Flow refinement iterations per level");
    app->add_option("--window-radius", window_radius, "Flow window radius in pixels");
    app->add_option("--regularization", regularization, "Flow structure-tensor regularization");
  }
  void apply(FlowEstimatorConfig& cfg) const {
    if (levels) cfg.pyramid_levels = *levels;
    if (iterations) cfg.iterations_per_level = *iterations;
    if (window_radius) cfg.window_radius = *window_radius;
    if (regularization) cfg.regularization = *regularization;
  }
};

struct RunFlags {
  std::optional<std::string> config_path, task, flow_source, flow_dir, model, consistency, scope, hole_fill, splat,
      occlusion, mask, metric_color;
  std::optional<double> omega, gamma, sigma, mask_constant, mask_lambda;
  std::optional<int> crop, threads;
  bool no_rectify = false, fusion = false;
  EstimatorFlags estimator;

  void attach(CLI::App* app) {
    app->add_option("--config", config_path, "JSON run configuration; flags override its fields");
    app->add_option("--task", task, "x2 or x4");
    app->add_option("--flow-source", flow_source, "estimate or files");
    app->add_option("--flow-dir", flow_dir, "Directory of <from>_<to>.flo files");
    estimator.attach(app);
    app->add_option("--model", model, "quadratic or linear");
    app->add_flag("--no-rectify", no_rectify, "Skip least-squares rectification");
    app->add_option("--omega", omega, "Rectifier weight steepness");
    app->add_option("--gamma", gamma, "Rectifier weight midpoint");
    app->add_option("--consistency", consistency, "pairwise-dot or component-sign");
    app->add_option("--consistency-scope", scope, "pixel or frame");
    app->add_option("--hole-fill", hole_fill, "outside-in or nearest");
    app->add_option("--splat", splat, "bilinear or gaussian");
    app->add_option("--splat-sigma", sigma, "Gaussian splat sigma");
    app->add_option("--occlusion", occlusion, "time-linear or hole-mask");
    app->add_flag("--fusion", fusion, "Enable two-scale fusion");
    app->add_option("--mask", mask, "Fusion mask: constant or agreement");
    app->add_option("--mask-constant", mask_constant, "Constant mask value");
    app->add_option("--mask-lambda", mask_lambda, "Agreement mask sensitivity");
    app->add_option("--metric-color", metric_color, "rgb or luma");
    app->add_option("--crop", crop, "Border pixels excluded from metrics");
    app->add_option("--threads", threads, "Worker threads (default: QUADINTERP_THREADS or core count)");
  }

  RunConfig build() const {
    RunConfig cfg;
    if (config_path) cfg = run_config_from_json(read_file(*config_path));
    if (task) cfg.task = parse_task(*task);
    if (flow_source) cfg.flow_source = parse_flow_source(*flow_source);
    if (flow_dir) {
      cfg.flow_dir = *flow_dir;
      if (!flow_source) cfg.flow_source = FlowSourceKind::Files;
    }
    estimator.apply(cfg.estimator);
    if (model) cfg.pipeline.model = parse_motion_model(*model);
    if (no_rectify) cfg.pipeline.rectify = false;
    if (omega) cfg.pipeline.rectifier.omega = *omega;
    if (gamma) cfg.pipeline.rectifier.gamma = *gamma;
    if (consistency) cfg.pipeline.rectifier.rule = parse_consistency_rule(*consistency);
    if (scope) cfg.pipeline.rectifier.scope = parse_consistency_scope(*scope);
    if (hole_fill) cfg.pipeline.warp.hole_fill = parse_hole_fill(*hole_fill);
    if (splat) cfg.pipeline.warp.splat_kernel = parse_splat_kernel(*splat);
    if (sigma) cfg.pipeline.warp.gaussian_sigma = *sigma;
    if (occlusion) cfg.pipeline.warp.occlusion_weighting = parse_occlusion(*occlusion);
    if (fusion) cfg.fusion.enabled = true;
    if (mask) cfg.fusion.kind = parse_mask_kind(*mask);
    if (mask_constant) cfg.fusion.constant = *mask_constant;
    if (mask_lambda) cfg.fusion.lambda = *mask_lambda;
    if (metric_color) cfg.metrics.color = parse_metric_color(*metric_color);
    if (crop) cfg.metrics.border_crop = *crop;
    if (threads) cfg.threads = *threads;
    cfg.validate();
    return cfg;
  }
};

int run_interpolate(const RunFlags& flags, const fs::path& input, const fs::path& output) {
  const RunConfig cfg = flags.build();
  const int stride = task_stride(cfg.task);
  const std::vector<FrameEntry> entries = list_frames(input);
  if (entries.size() < 2) throw ConfigError("need at least two input frames in " + input.string());
  std::vector<Frame> frames;
  std::vector<std::string> stems;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (i > 0 && entries[i].index - entries[i - 1].index != stride) {
      throw ConfigError(fmt::format("{} and {} are not {} indices apart; input frames must be numbered at the "
                                    "ground-truth rate so outputs can fill the gaps",
                                    entries[i - 1].path.string(), entries[i].path.string(), stride));
    }
    frames.push_back(load_frame(entries[i].path));
    stems.push_back(frame_stem(entries[i].index));
  }
  std::vector<SequenceOutput> outputs;
  if (cfg.flow_source == FlowSourceKind::Files) {
    FileFlowSource flows(cfg.flow_dir, stems);
    outputs = interpolate_sequence(frames, cfg, flows, input.filename().string());
  } else {
    EstimatedFlowSource flows(frames, cfg.estimator);
    outputs = interpolate_sequence(frames, cfg, flows, input.filename().string());
  }
  fs::create_directories(output);
  for (const SequenceOutput& o : outputs) {
    save_frame(o.frame, output / frame_file_name(entries[o.interval].index + o.step));
  }
  std::cout << fmt::format("wrote {} frames to {}\n", outputs.size(), output.string());
  return 0;
}

int run_benchmark(const RunFlags& flags, const fs::path& dataset, const BenchmarkOptions& options) {
  const RunConfig cfg = flags.build();
  const MetricReport report = benchmark(dataset, cfg, options);
  for (const SequenceSummary& s : report.per_sequence) {
    std::cout << fmt::format("{}: {} frames, PSNR {:.3f} dB, SSIM {:.4f}\n", s.sequence, s.frame_count,
                             s.mean_psnr_db, s.mean_ssim);
  }
  std::cout << fmt::format("{} mean over {} frames: PSNR {:.3f} dB, SSIM {:.4f}, {:.3f} s/frame\n",
                           task_name(report.task), report.per_frame.size(), report.mean_psnr_db, report.mean_ssim,
                           report.runtime_per_frame_s);
  if (!report.missing_ground_truth.empty()) {
    std::cerr << fmt::format("warning: {} targets had no ground truth\n", report.missing_ground_truth.size());
  }
  return 0;
}

// Direction as hue, magnitude as saturation; invalid pixels black.
Frame flow_to_color(const FlowField& f, double max_magnitude) {
  double max_mag = max_magnitude;
  if (!(max_mag > 0.0)) {
    max_mag = 0.0;
    for (int y = 0; y < f.height(); ++y)
      for (int x = 0; x < f.width(); ++x)
        if (f.valid(x, y)) max_mag = std::max(max_mag, norm(f.at(x, y)));
  }
  Frame out(f.width(), f.height(), 3);
  for (int y = 0; y < f.height(); ++y)
    for (int x = 0; x < f.width(); ++x) {
      if (!f.valid(x, y)) continue;
      const Vec2 v = f.at(x, y);
      const double s = max_mag > 0.0 ? std::min(1.0, norm(v) / max_mag) : 0.0;
      double h = std::atan2(v.y, v.x) / (2.0 * std::numbers::pi);
      if (h < 0.0) h += 1.0;
      for (int c = 0; c < 3; ++c) {
        const double k = std::fmod(5.0 - 2.0 * c + 6.0 * h, 6.0);  // HSV with V = 1
        out.at(x, y, c) = 1.0 - s * std::clamp(std::min(k, 4.0 - k), 0.0, 1.0);
      }
    }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quadratic-motion video frame interpolation"};
  app.require_subcommand(1);

  RunFlags interp_flags;
  std::string interp_input, interp_output;
  auto* interp = app.add_subcommand("interpolate", "Interpolate one directory of input frames");
  interp->add_option("--input", interp_input, "Directory of 8-digit PNG inputs")->required();
  interp->add_option("--output", interp_output, "Directory for interpolated frames")->required();
  interp_flags.attach(interp);

  RunFlags bench_flags;
  std::string bench_dataset;
  BenchmarkOptions bench_options;
  std::string bench_output, bench_csv, bench_json;
  auto* bench = app.add_subcommand("benchmark", "Subsample, interpolate and score a dataset");
  bench->add_option("--dataset", bench_dataset, "Dataset root with one directory per sequence")->required();
  bench->add_option("--output", bench_output, "Directory for interpolated frames");
  bench->add_option("--csv", bench_csv, "Per-frame CSV report path");
  bench->add_option("--json", bench_json, "JSON report path");
  bench_flags.attach(bench);

  std::string synth_spec, synth_output, synth_flow_dir, synth_task = "x4";
  SynthDatasetOptions synth_options;
  auto* synth = app.add_subcommand("synth", "Render a synthetic dataset with known motion");
  synth->add_option("--spec", synth_spec, "JSON scene description (defaults otherwise)");
  synth->add_option("--output", synth_output, "Dataset root to write")->required();
  synth->add_option("--sequences", synth_options.sequences, "Number of sequences")->capture_default_str();
  synth->add_option("--frames", synth_options.frames, "Ground-truth frames per sequence")->capture_default_str();
  synth->add_option("--task", synth_task, "x2 or x4 (input stride)")->capture_default_str();
  synth->add_option("--flow-dir", synth_flow_dir, "Also write exact input-to-input flows here");

  auto* flow = app.add_subcommand("flow", "Flow utilities");
  flow->require_subcommand(1);
  EstimatorFlags est_flags;
  std::string est_src, est_dst, est_out;
  auto* estimate = flow->add_subcommand("estimate", "Estimate flow from one frame to another");
  estimate->add_option("--src", est_src, "Source frame PNG")->required();
  estimate->add_option("--dst", est_dst, "Destination frame PNG")->required();
  estimate->add_option("--out", est_out, ".flo output path")->required();
  est_flags.attach(estimate);
  std::string conv_in, conv_out;
  double conv_max = 0.0;
  auto* convert = flow->add_subcommand("convert", "Render a .flo as a color PNG, or rewrite it");
  convert->add_option("--in", conv_in, ".flo input path")->required();
  convert->add_option("--out", conv_out, ".png (color coded) or .flo output path")->required();
  convert->add_option("--max-magnitude", conv_max, "Magnitude mapped to full saturation (0: field maximum)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (interp->parsed()) return run_interpolate(interp_flags, interp_input, interp_output);
    if (bench->parsed()) {
      if (!bench_output.empty()) bench_options.output_dir = bench_output;
      if (!bench_csv.empty()) bench_options.csv_path = fs::path(bench_csv);
      if (!bench_json.empty()) bench_options.json_path = fs::path(bench_json);
      return run_benchmark(bench_flags, bench_dataset, bench_options);
    }
    if (synth->parsed()) {
      const SyntheticSceneSpec spec =
          synth_spec.empty() ? SyntheticSceneSpec{} : scene_spec_from_json(read_file(synth_spec));
      synth_options.stride = task_stride(parse_task(synth_task));
      if (!synth_flow_dir.empty()) synth_options.flow_dir = fs::path(synth_flow_dir);
      emit_synthetic_dataset(spec, synth_output, synth_options);
      std::cout << fmt::format("wrote {} sequences to {}\n", synth_options.sequences, synth_output);
      return 0;
    }
    if (estimate->parsed()) {
      FlowEstimatorConfig cfg;
      est_flags.apply(cfg);
      cfg.validate();
      write_flow(estimate_flow(load_frame(est_src), load_frame(est_dst), cfg), est_out);
      return 0;
    }
    if (convert->parsed()) {
      const FlowField f = read_flow(conv_in);
      if (fs::path(conv_out).extension() == ".flo") {
        write_flow(f, conv_out);
      } else {
        save_frame(flow_to_color(f, conv_max), conv_out);
      }
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
