#include "quadinterp/warp.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <string>
#include <vector>

#include "quadinterp/raster.hpp"

namespace quadinterp {

namespace {

struct Accumulator {
  std::vector<double> weight;
  std::vector<Vec2> sum;

  explicit Accumulator(std::size_t n) : weight(n, 0.0), sum(n) {}
};

class Splatter {
 public:
  Splatter(int width, int height, const WarpConfig& cfg)
      : width_(width),
        height_(height),
        cfg_(cfg),
        radius_(static_cast<int>(std::ceil(3.0 * cfg.gaussian_sigma))) {}

  void splat(Accumulator& acc, Vec2 at, Vec2 value) const {
    if (cfg_.splat_kernel == SplatKernel::Bilinear) {
      const double fx0 = std::floor(at.x), fy0 = std::floor(at.y);
      // Reject far-away landings before converting to int.
      if (fx0 < -1.0 || fy0 < -1.0 || fx0 > width_ || fy0 > height_) return;
      const int x0 = static_cast<int>(fx0), y0 = static_cast<int>(fy0);
      const double fx = at.x - fx0, fy = at.y - fy0;
      add(acc, x0, y0, (1.0 - fx) * (1.0 - fy), value);
      add(acc, x0 + 1, y0, fx * (1.0 - fy), value);
      add(acc, x0, y0 + 1, (1.0 - fx) * fy, value);
      add(acc, x0 + 1, y0 + 1, fx * fy, value);
      return;
    }
    const double cx = std::round(at.x), cy = std::round(at.y);
    if (cx < -radius_ || cy < -radius_ || cx > width_ + radius_ || cy > height_ + radius_) return;
    const double inv_two_var = 1.0 / (2.0 * cfg_.gaussian_sigma * cfg_.gaussian_sigma);
    for (int dy = -radius_; dy <= radius_; ++dy)
      for (int dx = -radius_; dx <= radius_; ++dx) {
        const int x = static_cast<int>(cx) + dx, y = static_cast<int>(cy) + dy;
        const double ex = x - at.x, ey = y - at.y;
        add(acc, x, y, std::exp(-(ex * ex + ey * ey) * inv_two_var), value);
      }
  }

  int reach() const { return cfg_.splat_kernel == SplatKernel::Bilinear ? 1 : radius_; }

 private:
  void add(Accumulator& acc, int x, int y, double w, Vec2 value) const {
    if (x < 0 || y < 0 || x >= width_ || y >= height_ || w <= 0.0) return;
    const std::size_t i = static_cast<std::size_t>(y) * width_ + x;
    acc.weight[i] += w;
    acc.sum[i] += w * value;
  }

  int width_;
  int height_;
  const WarpConfig& cfg_;
  int radius_;
};

// First-order extrapolation of the flow to a position outside the grid:
// the nearest border value plus the one-sided border derivative times the
// distance. Exact for affine flow fields.
Vec2 extrapolate(const FlowField& f, int sx, int sy) {
  const int w = f.width(), h = f.height();
  const int bx = std::clamp(sx, 0, w - 1), by = std::clamp(sy, 0, h - 1);
  Vec2 v = f.at(bx, by);
  if (sx != bx && w > 1) {
    const Vec2 d = sx < 0 ? f.at(1, by) - f.at(0, by) : f.at(w - 1, by) - f.at(w - 2, by);
    v += static_cast<double>(sx - bx) * d;
  }
  if (sy != by && h > 1) {
    const Vec2 d = sy < 0 ? f.at(bx, 1) - f.at(bx, 0) : f.at(bx, h - 1) - f.at(bx, h - 2);
    v += static_cast<double>(sy - by) * d;
  }
  return v;
}

void fill_outside_in(FlowField& field) {
  const int w = field.width(), h = field.height();
  auto vectors = field.vectors();
  std::vector<std::uint8_t> known(field.valid_mask().begin(), field.valid_mask().end());
  std::vector<std::size_t> holes;
  for (std::size_t i = 0; i < known.size(); ++i)
    if (!known[i]) holes.push_back(i);

  std::vector<std::pair<std::size_t, Vec2>> filled;
  while (!holes.empty()) {
    filled.clear();
    std::vector<std::size_t> remaining;
    for (std::size_t i : holes) {
      const int x = static_cast<int>(i % w), y = static_cast<int>(i / w);
      Vec2 sum{};
      int count = 0;
      for (int dy = -1; dy <= 1; ++dy)
        for (int dx = -1; dx <= 1; ++dx) {
          const int nx = x + dx, ny = y + dy;
          if ((dx == 0 && dy == 0) || nx < 0 || ny < 0 || nx >= w || ny >= h) continue;
          const std::size_t j = static_cast<std::size_t>(ny) * w + nx;
          if (known[j]) {
            sum += vectors[j];
            ++count;
          }
        }
      if (count > 0) {
        filled.emplace_back(i, sum * (1.0 / count));
      } else {
        remaining.push_back(i);
      }
    }
    if (filled.empty()) {
      // No valid pixel anywhere: nothing to propagate.
      for (std::size_t i : remaining) vectors[i] = {};
      break;
    }
    for (const auto& [i, v] : filled) {
      vectors[i] = v;
      known[i] = 1;
    }
    holes.swap(remaining);
  }
}

void fill_nearest(FlowField& field) {
  const int w = field.width(), h = field.height();
  auto vectors = field.vectors();
  const auto valid = field.valid_mask();
  std::vector<std::uint8_t> seen(valid.begin(), valid.end());
  std::deque<std::size_t> queue;
  for (std::size_t i = 0; i < seen.size(); ++i)
    if (seen[i]) queue.push_back(i);
  if (queue.empty()) {
    std::fill(vectors.begin(), vectors.end(), Vec2{});
    return;
  }
  while (!queue.empty()) {
    const std::size_t i = queue.front();
    queue.pop_front();
    const int x = static_cast<int>(i % w), y = static_cast<int>(i / w);
    for (int dy = -1; dy <= 1; ++dy)
      for (int dx = -1; dx <= 1; ++dx) {
        const int nx = x + dx, ny = y + dy;
        if (nx < 0 || ny < 0 || nx >= w || ny >= h) continue;
        const std::size_t j = static_cast<std::size_t>(ny) * w + nx;
        if (seen[j]) continue;
        seen[j] = 1;
        vectors[j] = vectors[i];
        queue.push_back(j);
      }
  }
}

}  // namespace

void WarpConfig::validate() const {
  if (splat_kernel == SplatKernel::Gaussian && !(gaussian_sigma > 0.0 && std::isfinite(gaussian_sigma))) {
    throw ConfigError("gaussian splat sigma must be positive");
  }
}

FlowField reverse_flow(const FlowField& f_src_to_t, const WarpConfig& cfg) {
  cfg.validate();
  const int w = f_src_to_t.width(), h = f_src_to_t.height();
  const std::size_t n = f_src_to_t.pixel_count();
  const Splatter splatter(w, h, cfg);

  Accumulator interior(n);
  double max_component = 0.0;
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      const Vec2 f = f_src_to_t.at(x, y);
      max_component = std::max({max_component, std::abs(f.x), std::abs(f.y)});
      splatter.splat(interior, Vec2{x + f.x, y + f.y}, -f);
    }

  // Sources beyond the border only cover targets nothing inside reached.
  Accumulator border(n);
  const int margin = static_cast<int>(std::min<double>(
      std::max(w, h), std::ceil(max_component) + splatter.reach() + 1));
  for (int y = -margin; y < h + margin; ++y)
    for (int x = -margin; x < w + margin; ++x) {
      if (x >= 0 && x < w && y >= 0 && y < h) {
        x = w - 1;  // skip the interior span of this row
        continue;
      }
      const Vec2 f = extrapolate(f_src_to_t, x, y);
      splatter.splat(border, Vec2{x + f.x, y + f.y}, -f);
    }

  FlowField out(w, h);
  auto vectors = out.vectors();
  auto valid = out.valid_mask();
  for (std::size_t i = 0; i < n; ++i) {
    if (interior.weight[i] > 0.0) {
      vectors[i] = interior.sum[i] * (1.0 / interior.weight[i]);
    } else if (border.weight[i] > 0.0) {
      vectors[i] = border.sum[i] * (1.0 / border.weight[i]);
    } else {
      valid[i] = 0;
    }
  }
  if (!out.all_valid()) {
    if (cfg.hole_fill == HoleFill::OutsideInAverage) {
      fill_outside_in(out);
    } else {
      fill_nearest(out);
    }
  }
  return out;
}

Frame backward_warp(const Frame& frame, const FlowField& f_t_to_src) {
  require_matches(f_t_to_src, frame, "backward_warp");
  Frame out(frame.width(), frame.height(), frame.channels());
  for (int y = 0; y < frame.height(); ++y)
    for (int x = 0; x < frame.width(); ++x) {
      const Vec2 d = f_t_to_src.at(x, y);
      for (int c = 0; c < frame.channels(); ++c)
        out.at(x, y, c) = sample_bilinear(frame, x + d.x, y + d.y, c);
    }
  return out;
}

Frame synthesize(const Frame& warped0, const Frame& warped1, std::span<const std::uint8_t> valid0,
                 std::span<const std::uint8_t> valid1, TimeFraction t, const WarpConfig& cfg) {
  require_same_shape(warped0, warped1, "synthesize");
  if (valid0.size() != warped0.pixel_count() || valid1.size() != warped0.pixel_count()) {
    throw DimensionError("synthesize: validity masks do not match the frame size");
  }
  const double tv = t.value();
  const int nc = warped0.channels();
  Frame out(warped0.width(), warped0.height(), nc);
  const auto in0 = warped0.data();
  const auto in1 = warped1.data();
  auto dst = out.data();
  const bool masked = cfg.occlusion_weighting == OcclusionWeighting::HoleMaskScaled;
  for (std::size_t p = 0; p < warped0.pixel_count(); ++p) {
    const double w0 = (1.0 - tv) * (masked && !valid0[p] ? 0.0 : 1.0);
    const double w1 = tv * (masked && !valid1[p] ? 0.0 : 1.0);
    const double total = w0 + w1;
    for (int c = 0; c < nc; ++c) {
      const std::size_t i = p * nc + c;
      dst[i] = total > 0.0 ? (w0 * in0[i] + w1 * in1[i]) / total : 0.5 * (in0[i] + in1[i]);
    }
  }
  return out;
}

Frame overlay_baseline(const Frame& first, const Frame& second) {
  require_same_shape(first, second, "overlay_baseline");
  Frame out = first;
  auto dst = out.data();
  const auto src = second.data();
  for (std::size_t i = 0; i < dst.size(); ++i) dst[i] = 0.5 * (dst[i] + src[i]);
  return out;
}

}  // namespace quadinterp
