#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "quadinterp/error.hpp"

namespace quadinterp {

/// A displacement or motion vector in pixel units.
struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  constexpr Vec2& operator+=(Vec2 o) {
    x += o.x;
    y += o.y;
    return *this;
  }
  constexpr Vec2& operator-=(Vec2 o) {
    x -= o.x;
    y -= o.y;
    return *this;
  }
  constexpr Vec2& operator*=(double s) {
    x *= s;
    y *= s;
    return *this;
  }
  friend constexpr Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
  friend constexpr Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
  friend constexpr Vec2 operator-(Vec2 a) { return {-a.x, -a.y}; }
  friend constexpr Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
  friend constexpr Vec2 operator*(Vec2 a, double s) { return {s * a.x, s * a.y}; }
  friend constexpr bool operator==(Vec2, Vec2) = default;
};

constexpr double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }

/// H x W x C raster of real intensities, row-major with interleaved channels.
/// Values loaded from 8-bit files live in [0,1]; intermediate results may
/// leave that range and are only clamped on save.
class Frame {
 public:
  Frame() = default;
  Frame(int width, int height, int channels, double fill = 0.0);
  Frame(int width, int height, int channels, std::vector<double> data);

  int width() const { return width_; }
  int height() const { return height_; }
  int channels() const { return channels_; }
  std::size_t pixel_count() const { return static_cast<std::size_t>(width_) * height_; }
  bool empty() const { return data_.empty(); }

  double& at(int x, int y, int c) { return data_[index(x, y, c)]; }
  double at(int x, int y, int c) const { return data_[index(x, y, c)]; }

  std::span<double> data() { return data_; }
  std::span<const double> data() const { return data_; }

  bool same_shape(const Frame& o) const {
    return width_ == o.width_ && height_ == o.height_ && channels_ == o.channels_;
  }

  friend bool operator==(const Frame&, const Frame&) = default;

 private:
  std::size_t index(int x, int y, int c) const {
    return (static_cast<std::size_t>(y) * width_ + x) * channels_ + c;
  }

  int width_ = 0;
  int height_ = 0;
  int channels_ = 0;
  std::vector<double> data_;
};

/// Dense per-pixel displacement field. `valid` marks pixels that received a
/// direct estimate; reversal clears it where it had to fill a hole.
class FlowField {
 public:
  FlowField() = default;
  FlowField(int width, int height, Vec2 fill = {});

  int width() const { return width_; }
  int height() const { return height_; }
  std::size_t pixel_count() const { return static_cast<std::size_t>(width_) * height_; }

  Vec2& at(int x, int y) { return vectors_[index(x, y)]; }
  Vec2 at(int x, int y) const { return vectors_[index(x, y)]; }
  bool valid(int x, int y) const { return valid_[index(x, y)] != 0; }
  void set_valid(int x, int y, bool v) { valid_[index(x, y)] = v ? 1 : 0; }

  std::span<Vec2> vectors() { return vectors_; }
  std::span<const Vec2> vectors() const { return vectors_; }
  std::span<std::uint8_t> valid_mask() { return valid_; }
  std::span<const std::uint8_t> valid_mask() const { return valid_; }
  bool all_valid() const;

  bool same_shape(const FlowField& o) const { return width_ == o.width_ && height_ == o.height_; }
  bool matches(const Frame& f) const { return width_ == f.width() && height_ == f.height(); }

  friend bool operator==(const FlowField&, const FlowField&) = default;

 private:
  std::size_t index(int x, int y) const { return static_cast<std::size_t>(y) * width_ + x; }

  int width_ = 0;
  int height_ = 0;
  std::vector<Vec2> vectors_;
  std::vector<std::uint8_t> valid_;
};

/// A time position in [0,1] between two input frames.
class TimeFraction {
 public:
  explicit TimeFraction(double t);
  double value() const { return t_; }
  TimeFraction complement() const { return TimeFraction(1.0 - t_); }

 private:
  double t_;
};

void require_same_shape(const Frame& a, const Frame& b, const char* what);
void require_same_shape(const FlowField& a, const FlowField& b, const char* what);
void require_matches(const FlowField& f, const Frame& frame, const char* what);

}  // namespace quadinterp
