#include "quadinterp/raster.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace quadinterp {

namespace {

int clamp_index(int i, int n) { return std::clamp(i, 0, n - 1); }

struct BilinearTap {
  int x0, x1, y0, y1;
  double fx, fy;
};

// Lerp form keeps constants and integer positions exact.
BilinearTap bilinear_tap(double x, double y, int width, int height) {
  x = std::clamp(x, 0.0, static_cast<double>(width - 1));
  y = std::clamp(y, 0.0, static_cast<double>(height - 1));
  const int x0 = static_cast<int>(std::floor(x));
  const int y0 = static_cast<int>(std::floor(y));
  return {x0, std::min(x0 + 1, width - 1), y0, std::min(y0 + 1, height - 1), x - x0, y - y0};
}

template <typename T>
T lerp2(const BilinearTap& tap, T v00, T v10, T v01, T v11) {
  const T top = v00 + tap.fx * (v10 - v00);
  const T bottom = v01 + tap.fx * (v11 - v01);
  return top + tap.fy * (bottom - top);
}

// Source pixels per destination pixel. When the source is the downsample2
// grid of the destination, the block geometry is exactly 2:1 even for odd
// sizes.
double grid_ratio(int src_size, int dst_size) {
  if (src_size < dst_size && src_size == (dst_size + 1) / 2) return 0.5;
  return static_cast<double>(src_size) / dst_size;
}

double source_coordinate(int dst, int src_size, int dst_size) {
  return (dst + 0.5) * grid_ratio(src_size, dst_size) - 0.5;
}

void check_target(int w, int h) {
  if (w < 1 || h < 1) throw DimensionError("resample target dimensions must be at least 1x1");
}

}  // namespace

double sample_bilinear(const Frame& frame, double x, double y, int c) {
  const BilinearTap tap = bilinear_tap(x, y, frame.width(), frame.height());
  return lerp2(tap, frame.at(tap.x0, tap.y0, c), frame.at(tap.x1, tap.y0, c),
               frame.at(tap.x0, tap.y1, c), frame.at(tap.x1, tap.y1, c));
}

Frame edge_map(const Frame& frame) {
  const int w = frame.width(), h = frame.height(), nc = frame.channels();
  Frame out(w, h, nc);
  for (int y = 0; y < h; ++y) {
    const int ym = std::max(y - 1, 0), yp = std::min(y + 1, h - 1);
    const double dy_span = yp - ym;
    for (int x = 0; x < w; ++x) {
      const int xm = std::max(x - 1, 0), xp = std::min(x + 1, w - 1);
      const double dx_span = xp - xm;
      for (int c = 0; c < nc; ++c) {
        const double gx = dx_span > 0 ? (frame.at(xp, y, c) - frame.at(xm, y, c)) / dx_span : 0.0;
        const double gy = dy_span > 0 ? (frame.at(x, yp, c) - frame.at(x, ym, c)) / dy_span : 0.0;
        out.at(x, y, c) = std::sqrt(gx * gx + gy * gy);
      }
    }
  }
  return out;
}

Frame downsample2(const Frame& frame) {
  if (frame.width() < 2 || frame.height() < 2) {
    throw DimensionError("downsample2 needs at least a 2x2 frame");
  }
  const int w = (frame.width() + 1) / 2, h = (frame.height() + 1) / 2, nc = frame.channels();
  Frame out(w, h, nc);
  for (int y = 0; y < h; ++y) {
    const int y0 = 2 * y, y1 = std::min(2 * y + 1, frame.height() - 1);
    for (int x = 0; x < w; ++x) {
      const int x0 = 2 * x, x1 = std::min(2 * x + 1, frame.width() - 1);
      for (int c = 0; c < nc; ++c) {
        // Pairwise halving keeps constant blocks exact.
        out.at(x, y, c) = 0.5 * (0.5 * (frame.at(x0, y0, c) + frame.at(x1, y0, c)) +
                                 0.5 * (frame.at(x0, y1, c) + frame.at(x1, y1, c)));
      }
    }
  }
  return out;
}

Frame upsample2(const Frame& frame, int target_width, int target_height) {
  check_target(target_width, target_height);
  Frame out(target_width, target_height, frame.channels());
  for (int y = 0; y < target_height; ++y) {
    const double sy = source_coordinate(y, frame.height(), target_height);
    for (int x = 0; x < target_width; ++x) {
      const double sx = source_coordinate(x, frame.width(), target_width);
      for (int c = 0; c < frame.channels(); ++c) out.at(x, y, c) = sample_bilinear(frame, sx, sy, c);
    }
  }
  return out;
}

FlowField downsample2(const FlowField& flow) {
  if (flow.width() < 2 || flow.height() < 2) {
    throw DimensionError("downsample2 needs at least a 2x2 flow field");
  }
  const int w = (flow.width() + 1) / 2, h = (flow.height() + 1) / 2;
  FlowField out(w, h);
  for (int y = 0; y < h; ++y) {
    const int y0 = 2 * y, y1 = std::min(2 * y + 1, flow.height() - 1);
    for (int x = 0; x < w; ++x) {
      const int x0 = 2 * x, x1 = std::min(2 * x + 1, flow.width() - 1);
      const Vec2 mean =
          0.5 * (0.5 * (flow.at(x0, y0) + flow.at(x1, y0)) + 0.5 * (flow.at(x0, y1) + flow.at(x1, y1)));
      out.at(x, y) = 0.5 * mean;
      out.set_valid(x, y, flow.valid(x0, y0) && flow.valid(x1, y0) && flow.valid(x0, y1) &&
                              flow.valid(x1, y1));
    }
  }
  return out;
}

FlowField upsample2(const FlowField& flow, int target_width, int target_height) {
  check_target(target_width, target_height);
  const double scale_x = 1.0 / grid_ratio(flow.width(), target_width);
  const double scale_y = 1.0 / grid_ratio(flow.height(), target_height);
  FlowField out(target_width, target_height);
  for (int y = 0; y < target_height; ++y) {
    const double sy = source_coordinate(y, flow.height(), target_height);
    for (int x = 0; x < target_width; ++x) {
      const double sx = source_coordinate(x, flow.width(), target_width);
      const BilinearTap tap = bilinear_tap(sx, sy, flow.width(), flow.height());
      const Vec2 v = lerp2(tap, flow.at(tap.x0, tap.y0), flow.at(tap.x1, tap.y0),
                           flow.at(tap.x0, tap.y1), flow.at(tap.x1, tap.y1));
      out.at(x, y) = {v.x * scale_x, v.y * scale_y};
      const int nx = tap.fx < 0.5 ? tap.x0 : tap.x1;
      const int ny = tap.fy < 0.5 ? tap.y0 : tap.y1;
      out.set_valid(x, y, flow.valid(nx, ny));
    }
  }
  return out;
}

Frame blur_binomial(const Frame& frame) {
  static constexpr std::array<double, 5> kTaps = {1.0 / 16, 4.0 / 16, 6.0 / 16, 4.0 / 16, 1.0 / 16};
  const int w = frame.width(), h = frame.height(), nc = frame.channels();
  Frame horizontal(w, h, nc);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x)
      for (int c = 0; c < nc; ++c) {
        double acc = 0.0;
        for (int k = -2; k <= 2; ++k) acc += kTaps[k + 2] * frame.at(clamp_index(x + k, w), y, c);
        horizontal.at(x, y, c) = acc;
      }
  Frame out(w, h, nc);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x)
      for (int c = 0; c < nc; ++c) {
        double acc = 0.0;
        for (int k = -2; k <= 2; ++k) acc += kTaps[k + 2] * horizontal.at(x, clamp_index(y + k, h), c);
        out.at(x, y, c) = acc;
      }
  return out;
}

}  // namespace quadinterp
