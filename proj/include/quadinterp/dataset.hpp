#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "quadinterp/metrics.hpp"
#include "quadinterp/pipeline.hpp"
#include "quadinterp/run_config.hpp"
#include "quadinterp/synthbench.hpp"
#include "quadinterp/types.hpp"

namespace quadinterp {

/// "00000064.png" for 64.
std::string frame_file_name(long index);
std::string frame_stem(long index);

struct FrameEntry {
  long index = 0;
  std::filesystem::path path;
};

/// root/<sequence>/<8-digit index>.png, with inputs every `stride`-th frame
/// of the ground-truth rate.
struct DatasetLayout {
  std::filesystem::path root;
  int stride = 4;

  /// Sequence subdirectory names, sorted.
  std::vector<std::string> sequences() const;
  std::vector<FrameEntry> frames(const std::string& sequence) const;
};

/// Frames of one directory, sorted by index. Throws FormatError naming the
/// file when a .png is not named by an 8-digit index; other files are ignored.
std::vector<FrameEntry> list_frames(const std::filesystem::path& dir);

struct Target {
  long index = 0;          ///< ground-truth frame index
  std::size_t interval = 0;  ///< position of the interval's first input
  TimeFraction t{0.5};
};

struct Subsampling {
  std::vector<long> inputs;
  std::vector<Target> targets;
};

/// Inputs are first, first + stride, ... up to the last available index;
/// targets are the indices in between with t = j / stride. Works on index
/// values, so a gap in the ground truth leaves the target in place.
Subsampling subsample(std::span<const long> frame_indices, int stride);

/// One interpolated frame of a sequence.
struct SequenceOutput {
  std::size_t interval = 0;
  int step = 0;  ///< 1 .. stride-1; time fraction is step / stride
  Frame frame;
};

/// Interpolates every interval of `inputs` at the task's time fractions.
/// Failures are rethrown with the sequence name and interval attached.
std::vector<SequenceOutput> interpolate_sequence(std::span<const Frame> inputs, const RunConfig& cfg,
                                                 FlowSource& flows, const std::string& sequence_name = "");

/// Loads flows from <dir>/<from stem>_<to stem>.flo, stems given per input.
class FileFlowSource final : public FlowSource {
 public:
  FileFlowSource(std::filesystem::path dir, std::vector<std::string> stems);
  FlowField flow(std::size_t from, std::size_t to) override;

 private:
  std::filesystem::path dir_;
  std::vector<std::string> stems_;
};

struct BenchmarkOptions {
  /// Interpolated frames go to <output_dir>/<sequence>/; empty skips writing.
  std::filesystem::path output_dir;
  std::optional<std::filesystem::path> csv_path;
  std::optional<std::filesystem::path> json_path;
};

/// Subsamples each sequence at the task stride, interpolates, quantizes the
/// outputs to 8 bits and scores them against the ground truth of the same
/// index. Runtime covers computation only, not PNG decode/encode.
MetricReport benchmark(const std::filesystem::path& dataset_root, const RunConfig& cfg,
                       const BenchmarkOptions& options);

struct SynthDatasetOptions {
  int sequences = 1;
  /// Ground-truth frames per sequence, at tau = start_time + j / stride.
  int frames = 17;
  int stride = 4;
  /// When set, exact flows between input frames within two steps of each
  /// other are written to <flow_dir>/<sequence>/<from>_<to>.flo.
  std::optional<std::filesystem::path> flow_dir;
};

/// Writes sequences 000, 001, ... of the scene (seed incremented per
/// sequence) in the layout `benchmark` reads.
void emit_synthetic_dataset(const SyntheticSceneSpec& spec, const std::filesystem::path& root,
                            const SynthDatasetOptions& options);

}  // namespace quadinterp
