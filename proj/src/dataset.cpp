#include "quadinterp/dataset.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <exception>
#include <set>
#include <thread>

#include "quadinterp/flow_io.hpp"
#include "quadinterp/fusion.hpp"
#include "quadinterp/image_io.hpp"

namespace fs = std::filesystem;

namespace quadinterp {

namespace {

std::optional<long> parse_frame_name(const fs::path& p) {
  const std::string stem = p.stem().string();
  if (p.extension() != ".png" || stem.size() != 8) return std::nullopt;
  if (!std::all_of(stem.begin(), stem.end(), [](char c) { return c >= '0' && c <= '9'; })) return std::nullopt;
  return std::stol(stem);
}

void ensure_directory(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create directory " + dir.string() + ": " + ec.message());
}

struct SequenceResult {
  ReportBuilder builder;
  double seconds = 0.0;
  std::size_t produced = 0;
};

SequenceResult run_sequence(const DatasetLayout& layout, const std::string& name, const RunConfig& cfg,
                            const BenchmarkOptions& options) {
  SequenceResult result{ReportBuilder(cfg.metrics)};
  const std::vector<FrameEntry> entries = layout.frames(name);
  std::vector<long> indices;
  for (const FrameEntry& e : entries) indices.push_back(e.index);
  const fs::path seq_dir = layout.root / name;

  Subsampling plan;
  try {
    plan = subsample(indices, layout.stride);
  } catch (const Error& e) {
    throw FormatError(seq_dir.string() + ": " + e.what());
  }
  auto path_of = [&](long index) -> std::optional<fs::path> {
    const auto it = std::lower_bound(indices.begin(), indices.end(), index);
    if (it == indices.end() || *it != index) return std::nullopt;
    return entries[static_cast<std::size_t>(it - indices.begin())].path;
  };

  std::vector<Frame> inputs;
  std::vector<std::string> stems;
  for (long index : plan.inputs) {
    inputs.push_back(load_frame(*path_of(index)));
    stems.push_back(frame_stem(index));
    if (!inputs.back().same_shape(inputs.front())) {
      throw DimensionError(fmt::format("{}: frame {} differs in size or channels from frame {}",
                                       seq_dir.string(), frame_file_name(index), frame_file_name(plan.inputs[0])));
    }
  }

  const auto start = std::chrono::steady_clock::now();
  std::vector<SequenceOutput> outputs;
  if (cfg.flow_source == FlowSourceKind::Files) {
    FileFlowSource flows(cfg.flow_dir / name, stems);
    outputs = interpolate_sequence(inputs, cfg, flows, name);
  } else {
    EstimatedFlowSource flows(inputs, cfg.estimator);
    outputs = interpolate_sequence(inputs, cfg, flows, name);
  }
  for (SequenceOutput& o : outputs) o.frame = quantize(o.frame);
  result.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  result.produced = outputs.size();

  if (!options.output_dir.empty()) ensure_directory(options.output_dir / name);
  for (const SequenceOutput& o : outputs) {
    const long index = plan.inputs[o.interval] + o.step;
    const std::string stem = frame_stem(index);
    if (!options.output_dir.empty()) save_frame(o.frame, options.output_dir / name / frame_file_name(index));
    if (const auto gt_path = path_of(index)) {
      const Frame gt = load_frame(*gt_path);
      if (!gt.same_shape(o.frame)) {
        throw DimensionError(fmt::format("{}: ground truth differs in size or channels from the inputs",
                                         gt_path->string()));
      }
      result.builder.add(name, stem, o.frame, gt);
    } else {
      result.builder.add_missing(name, stem);
    }
  }
  return result;
}

}  // namespace

std::string frame_stem(long index) {
  if (index < 0) throw ConfigError("frame index must be nonnegative");
  return fmt::format("{:08d}", index);
}

std::string frame_file_name(long index) { return frame_stem(index) + ".png"; }

std::vector<FrameEntry> list_frames(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw IoError("not a directory: " + dir.string());
  std::vector<FrameEntry> out;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (!entry.is_regular_file() || entry.path().extension() != ".png") continue;
    const auto index = parse_frame_name(entry.path());
    if (!index) {
      throw FormatError("frame file is not named by an 8-digit index (e.g. 00000064.png): " +
                        entry.path().string());
    }
    out.push_back({*index, entry.path()});
  }
  std::sort(out.begin(), out.end(), [](const FrameEntry& a, const FrameEntry& b) { return a.index < b.index; });
  return out;
}

std::vector<std::string> DatasetLayout::sequences() const {
  if (!fs::is_directory(root)) throw IoError("dataset root is not a directory: " + root.string());
  std::vector<std::string> out;
  for (const auto& entry : fs::directory_iterator(root))
    if (entry.is_directory()) out.push_back(entry.path().filename().string());
  std::sort(out.begin(), out.end());
  if (out.empty()) throw FormatError("dataset root has no sequence subdirectories: " + root.string());
  return out;
}

std::vector<FrameEntry> DatasetLayout::frames(const std::string& sequence) const {
  return list_frames(root / sequence);
}

Subsampling subsample(std::span<const long> frame_indices, int stride) {
  if (stride != 2 && stride != 4) throw ConfigError(fmt::format("stride must be 2 or 4, got {}", stride));
  if (!std::is_sorted(frame_indices.begin(), frame_indices.end()) ||
      std::adjacent_find(frame_indices.begin(), frame_indices.end()) != frame_indices.end()) {
    throw ConfigError("frame indices must be strictly increasing");
  }
  if (frame_indices.empty() || frame_indices.back() - frame_indices.front() < stride) {
    throw ConfigError(fmt::format("need at least {} frames for stride {}, got {}", stride + 1, stride,
                                  frame_indices.size()));
  }
  const std::set<long> present(frame_indices.begin(), frame_indices.end());
  Subsampling out;
  for (long i = frame_indices.front(); i <= frame_indices.back(); i += stride) {
    if (!present.count(i)) throw FormatError(fmt::format("input frame {} is missing", frame_file_name(i)));
    out.inputs.push_back(i);
  }
  for (std::size_t k = 0; k + 1 < out.inputs.size(); ++k)
    for (int j = 1; j < stride; ++j)
      out.targets.push_back({out.inputs[k] + j, k, TimeFraction(static_cast<double>(j) / stride)});
  return out;
}

std::vector<SequenceOutput> interpolate_sequence(std::span<const Frame> inputs, const RunConfig& cfg,
                                                 FlowSource& flows, const std::string& sequence_name) {
  if (inputs.size() < 2) throw ConfigError("interpolation needs at least two input frames");
  const int stride = task_stride(cfg.task);
  const auto mask = make_mask_provider(cfg.fusion);
  std::vector<SequenceOutput> out;
  for (std::size_t k = 0; k + 1 < inputs.size(); ++k) {
    try {
      const SequenceWindow window{inputs, k};
      window.validate();
      std::optional<WindowMotion> motion;
      for (int j = 1; j < stride; ++j) {
        const TimeFraction t(static_cast<double>(j) / stride);
        if (cfg.fusion.enabled) {
          const TwoScaleResult two = run_two_scale(window, t, flows, cfg.pipeline);
          out.push_back({k, j, fuse(two.full, two.low_up, *mask)});
        } else {
          if (!motion) motion = estimate_window_motion(window, flows, cfg.pipeline);
          out.push_back({k, j, interpolate_from_motion(window, *motion, t, cfg.pipeline).frame});
        }
      }
    } catch (const Error& e) {
      const std::string where = sequence_name.empty() ? fmt::format("interval {}", k)
                                                      : fmt::format("sequence {}, interval {}", sequence_name, k);
      throw Error(where + ": " + e.what());
    }
  }
  return out;
}

FileFlowSource::FileFlowSource(fs::path dir, std::vector<std::string> stems)
    : dir_(std::move(dir)), stems_(std::move(stems)) {}

FlowField FileFlowSource::flow(std::size_t from, std::size_t to) {
  if (from >= stems_.size() || to >= stems_.size()) throw ConfigError("flow request outside the input range");
  const fs::path path = dir_ / (stems_[from] + "_" + stems_[to] + ".flo");
  if (!fs::exists(path)) throw IoError("flow file not found: " + path.string());
  return read_flow(path);
}

MetricReport benchmark(const fs::path& dataset_root, const RunConfig& cfg, const BenchmarkOptions& options) {
  cfg.validate();
  const DatasetLayout layout{dataset_root, task_stride(cfg.task)};
  const std::vector<std::string> names = layout.sequences();

  std::vector<std::optional<SequenceResult>> results(names.size());
  std::vector<std::exception_ptr> errors(names.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < names.size(); i = next++) {
      try {
        results[i] = run_sequence(layout, names[i], cfg, options);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const int threads = std::min<int>(resolve_thread_count(cfg.threads), static_cast<int>(names.size()));
  std::vector<std::thread> pool;
  for (int i = 1; i < threads; ++i) pool.emplace_back(worker);
  worker();
  for (std::thread& t : pool) t.join();
  for (const std::exception_ptr& e : errors)
    if (e) std::rethrow_exception(e);

  ReportBuilder merged(cfg.metrics);
  double seconds = 0.0;
  std::size_t produced = 0;
  for (auto& r : results) {
    seconds += r->seconds;
    produced += r->produced;
    merged.merge(std::move(r->builder));
  }
  const MetricReport report = merged.build(cfg.task, produced ? seconds / static_cast<double>(produced) : 0.0);
  if (options.csv_path) report.write_csv(*options.csv_path);
  if (options.json_path) report.write_json(*options.json_path);
  return report;
}

void emit_synthetic_dataset(const SyntheticSceneSpec& spec, const fs::path& root, const SynthDatasetOptions& options) {
  if (options.sequences < 1) throw ConfigError("need at least one sequence");
  if (options.stride != 2 && options.stride != 4) throw ConfigError("stride must be 2 or 4");
  if (options.frames < options.stride + 1) {
    throw ConfigError(fmt::format("need at least {} frames per sequence for stride {}", options.stride + 1,
                                  options.stride));
  }
  const int input_count = (options.frames - 1) / options.stride + 1;
  for (int s = 0; s < options.sequences; ++s) {
    SyntheticSceneSpec seq_spec = spec;
    seq_spec.seed = spec.seed + static_cast<std::uint64_t>(s);
    seq_spec.frame_count = (options.frames - 1 + options.stride - 1) / options.stride + 1;
    const SyntheticScene scene(seq_spec);
    const std::string name = fmt::format("{:03d}", s);

    ensure_directory(root / name);
    for (int j = 0; j < options.frames; ++j) {
      const double tau = spec.start_time + static_cast<double>(j) / options.stride;
      save_frame(scene.render(tau), root / name / frame_file_name(j));
    }
    if (options.flow_dir) {
      const fs::path dir = *options.flow_dir / name;
      ensure_directory(dir);
      for (int from = 0; from < input_count; ++from)
        for (int to = std::max(0, from - 2); to <= std::min(input_count - 1, from + 2); ++to) {
          if (to == from) continue;
          const FlowField f = scene.flow(spec.start_time + from, spec.start_time + to);
          write_flow(f, dir / (frame_stem(static_cast<long>(from) * options.stride) + "_" +
                               frame_stem(static_cast<long>(to) * options.stride) + ".flo"));
        }
    }
  }
}

}  // namespace quadinterp
