#pragma once

#include <array>
#include <utility>

#include "quadinterp/types.hpp"

namespace quadinterp {

/// Per-pixel quadratic trajectory x(t) = x0 + v0 t + a t^2 / 2, in pixels
/// per input-frame interval.
class MotionField {
 public:
  MotionField() = default;
  MotionField(int width, int height);

  int width() const { return width_; }
  int height() const { return height_; }
  std::size_t pixel_count() const { return velocity_.size(); }

  std::span<Vec2> velocity() { return velocity_; }
  std::span<const Vec2> velocity() const { return velocity_; }
  std::span<Vec2> acceleration() { return acceleration_; }
  std::span<const Vec2> acceleration() const { return acceleration_; }

  bool same_shape(const MotionField& o) const { return width_ == o.width_ && height_ == o.height_; }

  friend bool operator==(const MotionField&, const MotionField&) = default;

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<Vec2> velocity_;
  std::vector<Vec2> acceleration_;
};

enum class ConsistencyRule {
  /// a1.a2 > 0, a1.a3 > 0 and a2.a3 > 0; a zero vector agrees with anything.
  PairwiseDot,
  /// Every axis has no pair of strictly opposite signs among a1, a2, a3.
  ComponentSign,
};

enum class ConsistencyScope {
  /// Gate and weight each pixel on its own accelerations.
  PerPixel,
  /// Gate and weight the whole frame once, on the mean accelerations.
  PerFrame,
};

struct RectifierConfig {
  /// Steepness of the blend weight.
  double omega = 5.0;
  /// Acceleration disagreement at which the weight crosses 1/2.
  double gamma = 1.0;
  ConsistencyRule rule = ConsistencyRule::PairwiseDot;
  ConsistencyScope scope = ConsistencyScope::PerPixel;

  void validate() const;
};

/// Pseudo-inverse of the three-flow system
///   [-1 0.5; 1 0.5; 2 2] [v0; a] = [f(0->-1); f(0->1); f(0->2)]
/// i.e. (A^T A)^-1 A^T; row 0 yields v0, row 1 yields a.
inline constexpr std::array<std::array<double, 3>, 2> kLsePseudoInverse = {{
    {-6.5 / 11.0, 2.5 / 11.0, 1.0 / 11.0},
    {7.0 / 11.0, -1.0 / 11.0, 4.0 / 11.0},
}};

/// Exact solution of the f(0->-1), f(0->1) rows: v0 = (f1 - fm1)/2, a = f1 + fm1.
MotionField fit_two_frame(const FlowField& f_0_to_m1, const FlowField& f_0_to_1);

/// Constant-velocity model from a single flow: v0 = f(0->1), a = 0.
MotionField fit_linear(const FlowField& f_0_to_1);

/// Least-squares fit of all three flows through kLsePseudoInverse.
MotionField fit_lse(const FlowField& f_0_to_m1, const FlowField& f_0_to_1, const FlowField& f_0_to_2);

struct AccelerationTriple {
  FlowField a1;  ///< f(0->-1) + f(0->1)
  FlowField a2;  ///< (2/3) f(0->-1) + (1/3) f(0->2)
  FlowField a3;  ///< f(0->2) - 2 f(0->1)
};

/// Three pairwise acceleration estimates; all equal a under exact quadratic motion.
AccelerationTriple accelerations(const FlowField& f_0_to_m1, const FlowField& f_0_to_1,
                                 const FlowField& f_0_to_2);

/// alpha(z) = (1 - tanh(omega (z - gamma))) / 2, strictly decreasing in z.
/// Evaluated in logistic form, so it stays above zero far into the tail
/// where tanh would already round to 1.
double alpha_weight(double z, const RectifierConfig& cfg = {});

/// Whether three accelerations agree in orientation under `rule`.
bool orientation_consistent(Vec2 a1, Vec2 a2, Vec2 a3, ConsistencyRule rule);

/// Where the accelerations agree, blends alpha(|a1 - a2|) * lse +
/// (1 - alpha) * ori for both v0 and a; elsewhere returns ori unchanged.
MotionField rectify(const MotionField& ori, const MotionField& lse, const AccelerationTriple& acc,
                    const RectifierConfig& cfg = {});

/// f(0->t) = v0 t + a t^2 / 2.
FlowField predict_flow(const MotionField& motion, TimeFraction t);

/// (n * fwd, (1 - n) * bwd): linear rescaling of a bidirectional flow pair.
std::pair<FlowField, FlowField> scale_flow_linear(const FlowField& fwd, const FlowField& bwd,
                                                  TimeFraction n);

}  // namespace quadinterp
