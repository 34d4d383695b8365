#include "quadinterp/metrics.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <tuple>

#include "json.hpp"

namespace quadinterp {

namespace {

constexpr int kSsimWindow = 11;
constexpr double kSsimSigma = 1.5;
constexpr double kC1 = 0.01 * 0.01;
constexpr double kC2 = 0.03 * 0.03;

struct Plane {
  int width = 0;
  int height = 0;
  std::vector<double> v;
  double at(int x, int y) const { return v[static_cast<std::size_t>(y) * width + x]; }
};

std::vector<Plane> scoring_planes(const Frame& f, const MetricConfig& cfg) {
  const int crop = cfg.border_crop;
  if (crop < 0) throw ConfigError("border crop must be nonnegative");
  const int w = f.width() - 2 * crop, h = f.height() - 2 * crop;
  if (w < 1 || h < 1) throw DimensionError("border crop leaves no pixels to score");
  const bool luma = cfg.color == MetricColor::Luma && f.channels() == 3;
  const int planes = luma ? 1 : f.channels();
  std::vector<Plane> out(planes, Plane{w, h, std::vector<double>(static_cast<std::size_t>(w) * h)});
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      const std::size_t i = static_cast<std::size_t>(y) * w + x;
      if (luma) {
        out[0].v[i] = 0.299 * f.at(x + crop, y + crop, 0) + 0.587 * f.at(x + crop, y + crop, 1) +
                      0.114 * f.at(x + crop, y + crop, 2);
      } else {
        for (int c = 0; c < planes; ++c) out[c].v[i] = f.at(x + crop, y + crop, c);
      }
    }
  return out;
}

std::array<double, kSsimWindow> gaussian_window() {
  std::array<double, kSsimWindow> g{};
  double sum = 0.0;
  for (int i = 0; i < kSsimWindow; ++i) {
    const double d = i - kSsimWindow / 2;
    g[i] = std::exp(-d * d / (2.0 * kSsimSigma * kSsimSigma));
    sum += g[i];
  }
  for (double& v : g) v /= sum;
  return g;
}

// Separable valid-region Gaussian filter.
Plane filter_valid(const Plane& in, const std::array<double, kSsimWindow>& g) {
  const int ow = in.width - kSsimWindow + 1, oh = in.height - kSsimWindow + 1;
  Plane horizontal{ow, in.height, std::vector<double>(static_cast<std::size_t>(ow) * in.height)};
  for (int y = 0; y < in.height; ++y)
    for (int x = 0; x < ow; ++x) {
      double acc = 0.0;
      for (int k = 0; k < kSsimWindow; ++k) acc += g[k] * in.at(x + k, y);
      horizontal.v[static_cast<std::size_t>(y) * ow + x] = acc;
    }
  Plane out{ow, oh, std::vector<double>(static_cast<std::size_t>(ow) * oh)};
  for (int y = 0; y < oh; ++y)
    for (int x = 0; x < ow; ++x) {
      double acc = 0.0;
      for (int k = 0; k < kSsimWindow; ++k) acc += g[k] * horizontal.at(x, y + k);
      out.v[static_cast<std::size_t>(y) * ow + x] = acc;
    }
  return out;
}

double plane_ssim(const Plane& a, const Plane& b) {
  const auto g = gaussian_window();
  Plane aa = a, bb = b, ab = a;
  for (std::size_t i = 0; i < a.v.size(); ++i) {
    aa.v[i] = a.v[i] * a.v[i];
    bb.v[i] = b.v[i] * b.v[i];
    ab.v[i] = a.v[i] * b.v[i];
  }
  const Plane mu_a = filter_valid(a, g), mu_b = filter_valid(b, g);
  const Plane e_aa = filter_valid(aa, g), e_bb = filter_valid(bb, g), e_ab = filter_valid(ab, g);
  double total = 0.0;
  for (std::size_t i = 0; i < mu_a.v.size(); ++i) {
    const double ma = mu_a.v[i], mb = mu_b.v[i];
    const double var_a = e_aa.v[i] - ma * ma;
    const double var_b = e_bb.v[i] - mb * mb;
    const double cov = e_ab.v[i] - ma * mb;
    total += ((2.0 * ma * mb + kC1) * (2.0 * cov + kC2)) /
             ((ma * ma + mb * mb + kC1) * (var_a + var_b + kC2));
  }
  return total / static_cast<double>(mu_a.v.size());
}

bool by_key(const FrameScore& a, const FrameScore& b) {
  return std::tie(a.sequence, a.frame) < std::tie(b.sequence, b.frame);
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open report for writing: " + path.string());
  out << text;
  if (!out) throw IoError("failed writing report: " + path.string());
}

}  // namespace

double psnr(const Frame& out, const Frame& gt, const MetricConfig& cfg) {
  require_same_shape(out, gt, "psnr");
  const auto a = scoring_planes(out, cfg);
  const auto b = scoring_planes(gt, cfg);
  double sse = 0.0;
  std::size_t n = 0;
  for (std::size_t c = 0; c < a.size(); ++c)
    for (std::size_t i = 0; i < a[c].v.size(); ++i) {
      const double d = a[c].v[i] - b[c].v[i];
      sse += d * d;
      ++n;
    }
  const double mse = sse / static_cast<double>(n);
  if (mse == 0.0) return kPsnrCapDb;
  return std::clamp(10.0 * std::log10(1.0 / mse), 0.0, kPsnrCapDb);
}

double ssim(const Frame& out, const Frame& gt, const MetricConfig& cfg) {
  require_same_shape(out, gt, "ssim");
  const auto a = scoring_planes(out, cfg);
  const auto b = scoring_planes(gt, cfg);
  if (a[0].width < kSsimWindow || a[0].height < kSsimWindow) {
    throw DimensionError("ssim needs at least an 11x11 frame after cropping");
  }
  double sum = 0.0;
  for (std::size_t c = 0; c < a.size(); ++c) sum += plane_ssim(a[c], b[c]);
  return sum / static_cast<double>(a.size());
}

int task_stride(Task task) { return task == Task::X2 ? 2 : 4; }

std::string task_name(Task task) { return task == Task::X2 ? "x2" : "x4"; }

Task parse_task(const std::string& name) {
  if (name == "x2") return Task::X2;
  if (name == "x4") return Task::X4;
  throw ConfigError("unknown task '" + name + "' (expected x2 or x4)");
}

MetricReport build_report(std::vector<FrameScore> scores, std::vector<std::string> missing,
                          Task task, double runtime_per_frame_s) {
  if (scores.empty()) throw ConfigError("cannot build a report from an empty result set");
  std::sort(scores.begin(), scores.end(), by_key);
  std::sort(missing.begin(), missing.end());

  MetricReport report;
  report.task = task;
  report.runtime_per_frame_s = runtime_per_frame_s;
  double psnr_sum = 0.0, ssim_sum = 0.0;
  for (const FrameScore& s : scores) {
    psnr_sum += s.psnr_db;
    ssim_sum += s.ssim;
    if (report.per_sequence.empty() || report.per_sequence.back().sequence != s.sequence) {
      report.per_sequence.push_back({s.sequence, 0, 0.0, 0.0});
    }
    SequenceSummary& seq = report.per_sequence.back();
    ++seq.frame_count;
    seq.mean_psnr_db += s.psnr_db;
    seq.mean_ssim += s.ssim;
  }
  for (SequenceSummary& seq : report.per_sequence) {
    seq.mean_psnr_db /= static_cast<double>(seq.frame_count);
    seq.mean_ssim /= static_cast<double>(seq.frame_count);
  }
  report.mean_psnr_db = psnr_sum / static_cast<double>(scores.size());
  report.mean_ssim = ssim_sum / static_cast<double>(scores.size());
  report.per_frame = std::move(scores);
  report.missing_ground_truth = std::move(missing);
  return report;
}

std::string MetricReport::to_csv() const {
  const bool with_lpips =
      std::any_of(per_frame.begin(), per_frame.end(), [](const FrameScore& s) { return s.lpips.has_value(); });
  std::string out = with_lpips ? "sequence,frame,psnr_db,ssim,lpips\n" : "sequence,frame,psnr_db,ssim\n";
  for (const FrameScore& s : per_frame) {
    out += fmt::format("{},{},{:.6f},{:.6f}", s.sequence, s.frame, s.psnr_db, s.ssim);
    if (with_lpips) out += s.lpips ? fmt::format(",{:.6f}", *s.lpips) : std::string(",");
    out += '\n';
  }
  return out;
}

std::string MetricReport::to_json() const {
  nlohmann::ordered_json j;
  j["task"] = task_name(task);
  j["frame_count"] = per_frame.size();
  j["mean_psnr_db"] = mean_psnr_db;
  j["mean_ssim"] = mean_ssim;
  j["runtime_per_frame_s"] = runtime_per_frame_s;
  j["missing_ground_truth_count"] = missing_ground_truth.size();
  j["missing_ground_truth"] = missing_ground_truth;
  j["sequences"] = nlohmann::ordered_json::array();
  for (const SequenceSummary& s : per_sequence) {
    j["sequences"].push_back({{"sequence", s.sequence},
                              {"frame_count", s.frame_count},
                              {"mean_psnr_db", s.mean_psnr_db},
                              {"mean_ssim", s.mean_ssim}});
  }
  j["frames"] = nlohmann::ordered_json::array();
  for (const FrameScore& s : per_frame) {
    nlohmann::ordered_json row = {{"sequence", s.sequence},
                                  {"frame", s.frame},
                                  {"psnr_db", s.psnr_db},
                                  {"ssim", s.ssim}};
    row["lpips"] = s.lpips ? nlohmann::ordered_json(*s.lpips) : nlohmann::ordered_json(nullptr);
    j["frames"].push_back(std::move(row));
  }
  return j.dump(2) + "\n";
}

void MetricReport::write_csv(const std::filesystem::path& path) const { write_text(path, to_csv()); }

void MetricReport::write_json(const std::filesystem::path& path) const { write_text(path, to_json()); }

void ReportBuilder::add(const std::string& sequence, const std::string& frame, const Frame& out,
                        const Frame& gt) {
  scores_.push_back({sequence, frame, psnr(out, gt, cfg_), ssim(out, gt, cfg_), std::nullopt});
}

void ReportBuilder::add_missing(const std::string& sequence, const std::string& frame) {
  missing_.push_back(sequence + "/" + frame);
}

void ReportBuilder::merge(ReportBuilder other) {
  for (FrameScore& s : other.scores_) scores_.push_back(std::move(s));
  for (std::string& m : other.missing_) missing_.push_back(std::move(m));
}

MetricReport ReportBuilder::build(Task task, double runtime_per_frame_s) const {
  return build_report(scores_, missing_, task, runtime_per_frame_s);
}

}  // namespace quadinterp
