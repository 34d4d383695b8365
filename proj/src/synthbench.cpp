#include "quadinterp/synthbench.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>
#include <random>

#include "json.hpp"
#include "quadinterp/warp.hpp"

namespace quadinterp {

namespace {

constexpr int kNoiseWaves = 24;
constexpr double kNoiseMargin = 8.0;
constexpr std::array<double, 3> kChannelGain = {1.0, 0.85, 0.7};

double unit_uniform(std::mt19937_64& rng) {
  // Portable: std::uniform_real_distribution output is implementation-defined.
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

std::string pattern_name(PatternKind k) {
  switch (k) {
    case PatternKind::GaussianBlob: return "gaussian-blob";
    case PatternKind::BandLimitedNoise: return "band-limited-noise";
    case PatternKind::Ramp: return "ramp";
  }
  return "gaussian-blob";
}

PatternKind parse_pattern(const std::string& s) {
  if (s == "gaussian-blob") return PatternKind::GaussianBlob;
  if (s == "band-limited-noise") return PatternKind::BandLimitedNoise;
  if (s == "ramp") return PatternKind::Ramp;
  throw ConfigError("unknown pattern '" + s + "'");
}

Vec2 default_origin(const SyntheticSceneSpec& s) {
  return s.origin.value_or(Vec2{(s.width - 1) / 2.0, (s.height - 1) / 2.0});
}

// Range of one displacement component over [t0, t1].
std::pair<double, double> component_range(double v, double a, double t0, double t1) {
  auto at = [&](double t) { return v * t + 0.5 * a * t * t; };
  double lo = std::min(at(t0), at(t1)), hi = std::max(at(t0), at(t1));
  if (a != 0.0) {
    const double vertex = -v / a;
    if (vertex > t0 && vertex < t1) {
      lo = std::min(lo, at(vertex));
      hi = std::max(hi, at(vertex));
    }
  }
  return {lo, hi};
}

Vec2 read_vec(const nlohmann::json& j) {
  if (!j.is_array() || j.size() != 2) throw ConfigError("expected a [x, y] pair in scene spec");
  return {j[0].get<double>(), j[1].get<double>()};
}

}  // namespace

void SyntheticSceneSpec::validate() const {
  if (width < 1 || height < 1) throw ConfigError("scene dimensions must be positive");
  if (channels != 1 && channels != 3) throw ConfigError("scene channels must be 1 or 3");
  if (frame_count < 1) throw ConfigError("scene needs at least one frame");
  if (pattern == PatternKind::GaussianBlob && !(sigma > 0.0)) throw ConfigError("blob sigma must be positive");
  if (pattern == PatternKind::BandLimitedNoise && !(cutoff > 0.0 && cutoff <= 0.5)) {
    throw ConfigError("noise cutoff must lie in (0, 0.5] cycles per pixel");
  }
  const double margin = pattern == PatternKind::GaussianBlob ? 2.0 * sigma : kNoiseMargin;
  const Vec2 o = default_origin(*this);
  const double t0 = start_time, t1 = start_time + frame_count - 1;
  const auto [xlo, xhi] = component_range(v0.x, a.x, t0, t1);
  const auto [ylo, yhi] = component_range(v0.y, a.y, t0, t1);
  if (o.x + xlo < margin || o.x + xhi > width - 1 - margin || o.y + ylo < margin ||
      o.y + yhi > height - 1 - margin) {
    throw ConfigError(fmt::format(
        "scene trajectory leaves the {:.1f}px margin: x in [{:.2f}, {:.2f}], y in [{:.2f}, {:.2f}] "
        "for a {}x{} image",
        margin, o.x + xlo, o.x + xhi, o.y + ylo, o.y + yhi, width, height));
  }
}

SyntheticSceneSpec scene_spec_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("scene spec is not valid JSON: ") + e.what());
  }
  SyntheticSceneSpec s;
  try {
    s.width = j.value("width", s.width);
    s.height = j.value("height", s.height);
    s.channels = j.value("channels", s.channels);
    if (j.contains("pattern")) s.pattern = parse_pattern(j["pattern"].get<std::string>());
    s.sigma = j.value("sigma", s.sigma);
    s.amplitude = j.value("amplitude", s.amplitude);
    s.seed = j.value("seed", s.seed);
    s.cutoff = j.value("cutoff", s.cutoff);
    if (j.contains("origin") && !j["origin"].is_null()) s.origin = read_vec(j["origin"]);
    if (j.contains("v0")) s.v0 = read_vec(j["v0"]);
    if (j.contains("a")) s.a = read_vec(j["a"]);
    s.frame_count = j.value("frame_count", s.frame_count);
    s.start_time = j.value("start_time", s.start_time);
    s.background = j.value("background", s.background);
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("scene spec has a field of the wrong type: ") + e.what());
  }
  s.validate();
  return s;
}

std::string scene_spec_to_json(const SyntheticSceneSpec& s) {
  nlohmann::ordered_json j;
  j["width"] = s.width;
  j["height"] = s.height;
  j["channels"] = s.channels;
  j["pattern"] = pattern_name(s.pattern);
  j["sigma"] = s.sigma;
  j["amplitude"] = s.amplitude;
  j["seed"] = s.seed;
  j["cutoff"] = s.cutoff;
  j["origin"] = s.origin ? nlohmann::ordered_json{s.origin->x, s.origin->y} : nlohmann::ordered_json(nullptr);
  j["v0"] = {s.v0.x, s.v0.y};
  j["a"] = {s.a.x, s.a.y};
  j["frame_count"] = s.frame_count;
  j["start_time"] = s.start_time;
  j["background"] = s.background;
  return j.dump(2);
}

SyntheticScene::SyntheticScene(SyntheticSceneSpec spec) : spec_(std::move(spec)) {
  spec_.validate();
  origin_ = default_origin(spec_);
  if (spec_.pattern == PatternKind::BandLimitedNoise) {
    std::mt19937_64 rng(spec_.seed);
    for (int i = 0; i < kNoiseWaves; ++i) {
      const double freq = spec_.cutoff * (0.25 + 0.75 * unit_uniform(rng));
      const double angle = 2.0 * std::numbers::pi * unit_uniform(rng);
      const double phase = 2.0 * std::numbers::pi * unit_uniform(rng);
      waves_.push_back({2.0 * std::numbers::pi * freq * std::cos(angle),
                        2.0 * std::numbers::pi * freq * std::sin(angle), phase});
    }
  }
}

Vec2 SyntheticScene::displacement(double tau) const { return tau * spec_.v0 + (0.5 * tau * tau) * spec_.a; }

double SyntheticScene::pattern_value(double x, double y) const {
  switch (spec_.pattern) {
    case PatternKind::GaussianBlob: {
      const double r2 = x * x + y * y;
      return spec_.amplitude * std::exp(-r2 / (2.0 * spec_.sigma * spec_.sigma));
    }
    case PatternKind::BandLimitedNoise: {
      double sum = 0.0;
      for (const Wave& w : waves_) sum += std::cos(w.kx * x + w.ky * y + w.phase);
      return spec_.amplitude * sum / std::sqrt(kNoiseWaves / 2.0);
    }
    case PatternKind::Ramp:
      return spec_.amplitude * 0.5 * (x / spec_.width + y / spec_.height);
  }
  return 0.0;
}

Frame SyntheticScene::render(double tau) const {
  const Vec2 centre = origin_ + displacement(tau);
  Frame out(spec_.width, spec_.height, spec_.channels);
  for (int y = 0; y < spec_.height; ++y)
    for (int x = 0; x < spec_.width; ++x) {
      const double p = pattern_value(x - centre.x, y - centre.y);
      for (int c = 0; c < spec_.channels; ++c) {
        const double gain = spec_.channels == 1 ? 1.0 : kChannelGain[c];
        out.at(x, y, c) = spec_.background + gain * p;
      }
    }
  return out;
}

FlowField SyntheticScene::flow(double from_tau, double to_tau) const {
  return FlowField(spec_.width, spec_.height, displacement(to_tau) - displacement(from_tau));
}

SyntheticSequence generate(const SyntheticSceneSpec& spec) {
  SyntheticSequence seq{SyntheticScene(spec), {}, {}};
  for (int i = 0; i < spec.frame_count; ++i) seq.frames.push_back(seq.scene.render(spec.start_time + i));
  seq.true_flows = {seq.scene.flow(0.0, -1.0), seq.scene.flow(0.0, 1.0), seq.scene.flow(0.0, 2.0)};
  return seq;
}

FlowField SceneFlowSource::flow(std::size_t from, std::size_t to) {
  if (from >= times_.size() || to >= times_.size()) throw ConfigError("scene flow index out of range");
  return scene_.flow(times_[from], times_[to]);
}

MetricReport evaluate_pipeline(const SyntheticSceneSpec& spec, const EvaluationConfig& cfg) {
  if (spec.frame_count < 2) throw ConfigError("evaluation needs at least two frames");
  const SyntheticSequence seq = generate(spec);
  const int stride = task_stride(cfg.task);

  std::vector<double> times;
  for (int i = 0; i < spec.frame_count; ++i) times.push_back(spec.start_time + i);
  SceneFlowSource exact(seq.scene, times);
  EstimatedFlowSource estimated(seq.frames, cfg.estimator);
  FlowSource& flows = cfg.true_flows ? static_cast<FlowSource&>(exact) : estimated;
  const auto mask = make_mask_provider(cfg.fusion);

  ReportBuilder builder(cfg.metrics);
  double seconds = 0.0;
  std::size_t produced = 0;
  for (std::size_t k = 0; k + 1 < seq.frames.size(); ++k) {
    const SequenceWindow window{seq.frames, k};
    const auto start = std::chrono::steady_clock::now();
    std::vector<Frame> outputs;
    std::optional<WindowMotion> motion;
    for (int j = 1; j < stride; ++j) {
      const TimeFraction t(static_cast<double>(j) / stride);
      if (cfg.overlay) {
        outputs.push_back(overlay_baseline(window.frame0(), window.frame1()));
      } else if (cfg.fusion.enabled) {
        const TwoScaleResult two = run_two_scale(window, t, flows, cfg.pipeline);
        outputs.push_back(fuse(two.full, two.low_up, *mask));
      } else {
        if (!motion) motion = estimate_window_motion(window, flows, cfg.pipeline);
        outputs.push_back(interpolate_from_motion(window, *motion, t, cfg.pipeline).frame);
      }
    }
    seconds += std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    for (int j = 1; j < stride; ++j) {
      const double tau = times[k] + static_cast<double>(j) / stride;
      builder.add("synth", fmt::format("{:08d}", static_cast<int>(k) * stride + j), outputs[j - 1],
                  seq.intermediate(tau));
      ++produced;
    }
  }
  return builder.build(cfg.task, seconds / static_cast<double>(produced));
}

}  // namespace quadinterp
