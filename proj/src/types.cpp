#include "quadinterp/types.hpp"

#include <algorithm>
#include <string>

namespace quadinterp {

namespace {

void check_dims(int width, int height) {
  if (width < 1 || height < 1) {
    throw DimensionError("raster dimensions must be at least 1x1, got " + std::to_string(width) +
                         "x" + std::to_string(height));
  }
}

std::string shape_string(int w, int h) { return std::to_string(w) + "x" + std::to_string(h); }

}  // namespace

Frame::Frame(int width, int height, int channels, double fill)
    : width_(width), height_(height), channels_(channels) {
  check_dims(width, height);
  if (channels != 1 && channels != 3) {
    throw DimensionError("frames carry 1 or 3 channels, got " + std::to_string(channels));
  }
  data_.assign(static_cast<std::size_t>(width) * height * channels, fill);
}

Frame::Frame(int width, int height, int channels, std::vector<double> data)
    : Frame(width, height, channels) {
  if (data.size() != data_.size()) {
    throw DimensionError("frame data length " + std::to_string(data.size()) + " does not match " +
                         shape_string(width, height) + "x" + std::to_string(channels));
  }
  if (!std::all_of(data.begin(), data.end(), [](double v) { return std::isfinite(v); })) {
    throw ConfigError("frame data contains non-finite values");
  }
  data_ = std::move(data);
}

FlowField::FlowField(int width, int height, Vec2 fill) : width_(width), height_(height) {
  check_dims(width, height);
  vectors_.assign(pixel_count(), fill);
  valid_.assign(pixel_count(), 1);
}

bool FlowField::all_valid() const {
  return std::all_of(valid_.begin(), valid_.end(), [](std::uint8_t v) { return v != 0; });
}

TimeFraction::TimeFraction(double t) : t_(t) {
  if (!(t >= 0.0 && t <= 1.0)) {
    throw ConfigError("time fraction must lie in [0,1], got " + std::to_string(t));
  }
}

void require_same_shape(const Frame& a, const Frame& b, const char* what) {
  if (!a.same_shape(b)) {
    throw DimensionError(std::string(what) + ": frame shapes differ (" +
                         shape_string(a.width(), a.height()) + "x" + std::to_string(a.channels()) +
                         " vs " + shape_string(b.width(), b.height()) + "x" +
                         std::to_string(b.channels()) + ")");
  }
}

void require_same_shape(const FlowField& a, const FlowField& b, const char* what) {
  if (!a.same_shape(b)) {
    throw DimensionError(std::string(what) + ": flow shapes differ (" +
                         shape_string(a.width(), a.height()) + " vs " +
                         shape_string(b.width(), b.height()) + ")");
  }
}

void require_matches(const FlowField& f, const Frame& frame, const char* what) {
  if (!f.matches(frame)) {
    throw DimensionError(std::string(what) + ": flow " + shape_string(f.width(), f.height()) +
                         " does not index frame " + shape_string(frame.width(), frame.height()));
  }
}

}  // namespace quadinterp
