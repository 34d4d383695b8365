#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "quadinterp/types.hpp"

namespace quadinterp {

/// PSNR reported for identical frames.
inline constexpr double kPsnrCapDb = 99.0;

enum class MetricColor {
  /// Every channel scored, then averaged.
  Rgb,
  /// BT.601 luma of RGB inputs; gray inputs are used as-is.
  Luma,
};

struct MetricConfig {
  MetricColor color = MetricColor::Rgb;
  /// Pixels dropped from each border before scoring.
  int border_crop = 0;
};

/// 10 log10(1 / MSE) over all pixels and channels, clamped to [0, 99] dB.
double psnr(const Frame& out, const Frame& gt, const MetricConfig& cfg = {});

/// Mean local SSIM: 11x11 Gaussian window (sigma 1.5), K1 = 0.01,
/// K2 = 0.03, dynamic range 1, valid-region filtering, channel average.
double ssim(const Frame& out, const Frame& gt, const MetricConfig& cfg = {});

enum class Task { X2, X4 };

/// Ground-truth frames per input interval: 2 for x2, 4 for x4.
int task_stride(Task task);
std::string task_name(Task task);
Task parse_task(const std::string& name);

struct FrameScore {
  std::string sequence;
  std::string frame;
  double psnr_db = 0.0;
  double ssim = 0.0;
  /// Externally computed perceptual score, if any.
  std::optional<double> lpips;
};

struct SequenceSummary {
  std::string sequence;
  std::size_t frame_count = 0;
  double mean_psnr_db = 0.0;
  double mean_ssim = 0.0;
};

struct MetricReport {
  Task task = Task::X4;
  /// Sorted by (sequence, frame).
  std::vector<FrameScore> per_frame;
  std::vector<SequenceSummary> per_sequence;
  double mean_psnr_db = 0.0;
  double mean_ssim = 0.0;
  double runtime_per_frame_s = 0.0;
  /// "sequence/frame" outputs that had no ground truth and were not scored.
  std::vector<std::string> missing_ground_truth;

  /// Columns: sequence,frame,psnr_db,ssim (plus lpips when any frame has it).
  std::string to_csv() const;
  /// Per-frame rows plus per-sequence and overall aggregates.
  std::string to_json() const;
  void write_csv(const std::filesystem::path& path) const;
  void write_json(const std::filesystem::path& path) const;
};

/// Aggregates per-frame scores. Throws if there is nothing to report.
MetricReport build_report(std::vector<FrameScore> scores, std::vector<std::string> missing,
                          Task task, double runtime_per_frame_s);

/// Scores frames as they are produced so callers need not keep them alive.
class ReportBuilder {
 public:
  explicit ReportBuilder(MetricConfig cfg = {}) : cfg_(cfg) {}

  void add(const std::string& sequence, const std::string& frame, const Frame& out, const Frame& gt);
  void add_score(FrameScore score) { scores_.push_back(std::move(score)); }
  void add_missing(const std::string& sequence, const std::string& frame);
  void merge(ReportBuilder other);

  MetricReport build(Task task, double runtime_per_frame_s) const;

 private:
  MetricConfig cfg_;
  std::vector<FrameScore> scores_;
  std::vector<std::string> missing_;
};

}  // namespace quadinterp
