#include "quadinterp/flow_estimator.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "quadinterp/raster.hpp"

namespace quadinterp {

namespace {

constexpr int kMinLevelSize = 8;

// Single-channel plane used for the tensor terms.
struct Plane {
  int width = 0;
  int height = 0;
  std::vector<double> values;

  Plane(int w, int h) : width(w), height(h), values(static_cast<std::size_t>(w) * h, 0.0) {}
  double& at(int x, int y) { return values[static_cast<std::size_t>(y) * width + x]; }
  double at(int x, int y) const { return values[static_cast<std::size_t>(y) * width + x]; }
};

// Box sum over a (2r+1)^2 window truncated to the plane, via an integral image.
Plane box_sum(const Plane& in, int radius) {
  const int w = in.width, h = in.height;
  std::vector<double> integral(static_cast<std::size_t>(w + 1) * (h + 1), 0.0);
  auto I = [&](int x, int y) -> double& { return integral[static_cast<std::size_t>(y) * (w + 1) + x]; };
  for (int y = 0; y < h; ++y) {
    double row = 0.0;
    for (int x = 0; x < w; ++x) {
      row += in.at(x, y);
      I(x + 1, y + 1) = I(x + 1, y) + row;
    }
  }
  Plane out(w, h);
  for (int y = 0; y < h; ++y) {
    const int y0 = std::max(y - radius, 0), y1 = std::min(y + radius, h - 1) + 1;
    for (int x = 0; x < w; ++x) {
      const int x0 = std::max(x - radius, 0), x1 = std::min(x + radius, w - 1) + 1;
      out.at(x, y) = I(x1, y1) - I(x0, y1) - I(x1, y0) + I(x0, y0);
    }
  }
  return out;
}

// Two stacked boxes: a tent-shaped window of the given radius. Its
// frequency response is nonnegative, unlike a single box, so repeated
// refinement cannot amplify oscillating flow errors.
Plane tent_sum(const Plane& in, int radius) {
  const int first = (radius + 1) / 2;
  return box_sum(box_sum(in, first), radius - first);
}

// Central-difference derivative of channel c, one-sided at the borders.
std::array<double, 2> gradient(const Frame& f, int x, int y, int c) {
  const int w = f.width(), h = f.height();
  const int xm = std::max(x - 1, 0), xp = std::min(x + 1, w - 1);
  const int ym = std::max(y - 1, 0), yp = std::min(y + 1, h - 1);
  const double gx = xp > xm ? (f.at(xp, y, c) - f.at(xm, y, c)) / (xp - xm) : 0.0;
  const double gy = yp > ym ? (f.at(x, yp, c) - f.at(x, ym, c)) / (yp - ym) : 0.0;
  return {gx, gy};
}

Frame warp_by(const Frame& frame, const FlowField& flow) {
  Frame out(frame.width(), frame.height(), frame.channels());
  for (int y = 0; y < frame.height(); ++y)
    for (int x = 0; x < frame.width(); ++x) {
      const Vec2 d = flow.at(x, y);
      for (int c = 0; c < frame.channels(); ++c)
        out.at(x, y, c) = sample_bilinear(frame, x + d.x, y + d.y, c);
    }
  return out;
}

void refine(const Frame& src, const Frame& dst, FlowField& flow, const FlowEstimatorConfig& cfg) {
  const int w = src.width(), h = src.height(), nc = src.channels();
  const double max_step = cfg.window_radius;
  for (int iter = 0; iter < cfg.iterations_per_level; ++iter) {
    const Frame warped = warp_by(dst, flow);
    Plane ixx(w, h), ixy(w, h), iyy(w, h), ixt(w, h), iyt(w, h);
    for (int y = 0; y < h; ++y)
      for (int x = 0; x < w; ++x)
        for (int c = 0; c < nc; ++c) {
          const auto gs = gradient(src, x, y, c);
          const auto gw = gradient(warped, x, y, c);
          const double gx = 0.5 * (gs[0] + gw[0]);
          const double gy = 0.5 * (gs[1] + gw[1]);
          const double it = warped.at(x, y, c) - src.at(x, y, c);
          ixx.at(x, y) += gx * gx;
          ixy.at(x, y) += gx * gy;
          iyy.at(x, y) += gy * gy;
          ixt.at(x, y) += gx * it;
          iyt.at(x, y) += gy * it;
        }
    const Plane sxx = tent_sum(ixx, cfg.window_radius);
    const Plane sxy = tent_sum(ixy, cfg.window_radius);
    const Plane syy = tent_sum(iyy, cfg.window_radius);
    const Plane sxt = tent_sum(ixt, cfg.window_radius);
    const Plane syt = tent_sum(iyt, cfg.window_radius);

    for (int y = 0; y < h; ++y)
      for (int x = 0; x < w; ++x) {
        const double a = sxx.at(x, y) + cfg.regularization;
        const double b = sxy.at(x, y);
        const double d = syy.at(x, y) + cfg.regularization;
        const double det = a * d - b * b;
        if (!(det > 0.0)) continue;
        // Solve [a b; b d] du = -[sxt; syt].
        const double rx = -sxt.at(x, y), ry = -syt.at(x, y);
        Vec2 step{(d * rx - b * ry) / det, (a * ry - b * rx) / det};
        const double len = norm(step);
        if (len > max_step) step *= max_step / len;
        flow.at(x, y) += step;
      }
  }
}

}  // namespace

void FlowEstimatorConfig::validate() const {
  if (pyramid_levels < 1) throw ConfigError("pyramid_levels must be >= 1");
  if (iterations_per_level < 1) throw ConfigError("iterations_per_level must be >= 1");
  if (window_radius < 1) throw ConfigError("window_radius must be >= 1");
  if (!(regularization >= 0.0) || !std::isfinite(regularization)) {
    throw ConfigError("regularization must be a finite nonnegative number");
  }
}

FlowField estimate_flow(const Frame& src, const Frame& dst, const FlowEstimatorConfig& cfg) {
  cfg.validate();
  require_same_shape(src, dst, "estimate_flow");

  std::vector<Frame> src_levels{src};
  std::vector<Frame> dst_levels{dst};
  while (static_cast<int>(src_levels.size()) < cfg.pyramid_levels) {
    const Frame& s = src_levels.back();
    if ((s.width() + 1) / 2 < kMinLevelSize || (s.height() + 1) / 2 < kMinLevelSize) break;
    src_levels.push_back(downsample2(blur_binomial(s)));
    dst_levels.push_back(downsample2(blur_binomial(dst_levels.back())));
  }

  FlowField flow;
  for (int level = static_cast<int>(src_levels.size()) - 1; level >= 0; --level) {
    const Frame& s = src_levels[level];
    flow = flow.pixel_count() == 0 ? FlowField(s.width(), s.height())
                                   : upsample2(flow, s.width(), s.height());
    refine(s, dst_levels[level], flow, cfg);
  }
  std::fill(flow.valid_mask().begin(), flow.valid_mask().end(), std::uint8_t{1});
  return flow;
}

}  // namespace quadinterp
