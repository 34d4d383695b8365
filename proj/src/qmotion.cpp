#include "quadinterp/qmotion.hpp"

#include <cmath>
#include <string>

namespace quadinterp {

namespace {

MotionField blank_motion(const FlowField& like) { return MotionField(like.width(), like.height()); }

FlowField blank_flow(const FlowField& like) { return FlowField(like.width(), like.height()); }

bool axis_agrees(double p, double q, double r) {
  const bool any_positive = p > 0 || q > 0 || r > 0;
  const bool any_negative = p < 0 || q < 0 || r < 0;
  return !(any_positive && any_negative);
}

bool pair_agrees(Vec2 p, Vec2 q) {
  if (p == Vec2{} || q == Vec2{}) return true;
  return dot(p, q) > 0.0;
}

Vec2 mean_of(std::span<const Vec2> values) {
  Vec2 sum{};
  for (const Vec2& v : values) sum += v;
  return values.empty() ? sum : sum * (1.0 / static_cast<double>(values.size()));
}

}  // namespace

MotionField::MotionField(int width, int height)
    : width_(width),
      height_(height),
      velocity_(static_cast<std::size_t>(width) * height),
      acceleration_(static_cast<std::size_t>(width) * height) {
  if (width < 1 || height < 1) throw DimensionError("motion field must be at least 1x1");
}

void RectifierConfig::validate() const {
  if (!(omega > 0.0) || !std::isfinite(omega)) throw ConfigError("omega must be positive and finite");
  if (!(gamma >= 0.0) || !std::isfinite(gamma)) throw ConfigError("gamma must be nonnegative and finite");
}

MotionField fit_two_frame(const FlowField& f_0_to_m1, const FlowField& f_0_to_1) {
  require_same_shape(f_0_to_m1, f_0_to_1, "fit_two_frame");
  MotionField out = blank_motion(f_0_to_1);
  const auto fm1 = f_0_to_m1.vectors();
  const auto f1 = f_0_to_1.vectors();
  auto v0 = out.velocity();
  auto a = out.acceleration();
  for (std::size_t i = 0; i < v0.size(); ++i) {
    v0[i] = 0.5 * (f1[i] - fm1[i]);
    a[i] = f1[i] + fm1[i];
  }
  return out;
}

MotionField fit_linear(const FlowField& f_0_to_1) {
  MotionField out = blank_motion(f_0_to_1);
  std::copy(f_0_to_1.vectors().begin(), f_0_to_1.vectors().end(), out.velocity().begin());
  return out;
}

MotionField fit_lse(const FlowField& f_0_to_m1, const FlowField& f_0_to_1, const FlowField& f_0_to_2) {
  require_same_shape(f_0_to_m1, f_0_to_1, "fit_lse");
  require_same_shape(f_0_to_1, f_0_to_2, "fit_lse");
  const auto& P = kLsePseudoInverse;
  MotionField out = blank_motion(f_0_to_1);
  const auto fm1 = f_0_to_m1.vectors();
  const auto f1 = f_0_to_1.vectors();
  const auto f2 = f_0_to_2.vectors();
  auto v0 = out.velocity();
  auto a = out.acceleration();
  for (std::size_t i = 0; i < v0.size(); ++i) {
    v0[i] = P[0][0] * fm1[i] + P[0][1] * f1[i] + P[0][2] * f2[i];
    a[i] = P[1][0] * fm1[i] + P[1][1] * f1[i] + P[1][2] * f2[i];
  }
  return out;
}

AccelerationTriple accelerations(const FlowField& f_0_to_m1, const FlowField& f_0_to_1,
                                 const FlowField& f_0_to_2) {
  require_same_shape(f_0_to_m1, f_0_to_1, "accelerations");
  require_same_shape(f_0_to_1, f_0_to_2, "accelerations");
  AccelerationTriple out{blank_flow(f_0_to_1), blank_flow(f_0_to_1), blank_flow(f_0_to_1)};
  const auto fm1 = f_0_to_m1.vectors();
  const auto f1 = f_0_to_1.vectors();
  const auto f2 = f_0_to_2.vectors();
  auto a1 = out.a1.vectors();
  auto a2 = out.a2.vectors();
  auto a3 = out.a3.vectors();
  for (std::size_t i = 0; i < a1.size(); ++i) {
    a1[i] = fm1[i] + f1[i];
    a2[i] = (2.0 / 3.0) * fm1[i] + (1.0 / 3.0) * f2[i];
    a3[i] = f2[i] - 2.0 * f1[i];
  }
  return out;
}

double alpha_weight(double z, const RectifierConfig& cfg) {
  // (1 - tanh(x)) / 2 = 1 / (1 + e^{2x}); the exponent is kept nonpositive so
  // nothing overflows and the tail stays strictly positive.
  const double x = cfg.omega * (z - cfg.gamma);
  if (x <= 0.0) return 1.0 / (1.0 + std::exp(2.0 * x));
  const double e = std::exp(-2.0 * x);
  return e / (1.0 + e);
}

bool orientation_consistent(Vec2 a1, Vec2 a2, Vec2 a3, ConsistencyRule rule) {
  switch (rule) {
    case ConsistencyRule::PairwiseDot:
      return pair_agrees(a1, a2) && pair_agrees(a1, a3) && pair_agrees(a2, a3);
    case ConsistencyRule::ComponentSign:
      return axis_agrees(a1.x, a2.x, a3.x) && axis_agrees(a1.y, a2.y, a3.y);
  }
  return false;
}

MotionField rectify(const MotionField& ori, const MotionField& lse, const AccelerationTriple& acc,
                    const RectifierConfig& cfg) {
  cfg.validate();
  if (!ori.same_shape(lse) || ori.width() != acc.a1.width() || ori.height() != acc.a1.height()) {
    throw DimensionError("rectify: motion and acceleration fields differ in shape");
  }
  require_same_shape(acc.a1, acc.a2, "rectify");
  require_same_shape(acc.a1, acc.a3, "rectify");

  MotionField out = ori;
  const auto a1 = acc.a1.vectors();
  const auto a2 = acc.a2.vectors();
  const auto a3 = acc.a3.vectors();
  auto v0 = out.velocity();
  auto a = out.acceleration();
  const auto v0_lse = lse.velocity();
  const auto a_lse = lse.acceleration();

  auto blend = [&](std::size_t i, double alpha) {
    v0[i] = alpha * v0_lse[i] + (1.0 - alpha) * v0[i];
    a[i] = alpha * a_lse[i] + (1.0 - alpha) * a[i];
  };

  if (cfg.scope == ConsistencyScope::PerFrame) {
    const Vec2 m1 = mean_of(a1), m2 = mean_of(a2), m3 = mean_of(a3);
    if (!orientation_consistent(m1, m2, m3, cfg.rule)) return out;
    const double alpha = alpha_weight(norm(m1 - m2), cfg);
    for (std::size_t i = 0; i < v0.size(); ++i) blend(i, alpha);
    return out;
  }

  for (std::size_t i = 0; i < v0.size(); ++i) {
    if (!orientation_consistent(a1[i], a2[i], a3[i], cfg.rule)) continue;
    blend(i, alpha_weight(norm(a1[i] - a2[i]), cfg));
  }
  return out;
}

FlowField predict_flow(const MotionField& motion, TimeFraction t) {
  const double tv = t.value();
  FlowField out(motion.width(), motion.height());
  auto f = out.vectors();
  const auto v0 = motion.velocity();
  const auto a = motion.acceleration();
  for (std::size_t i = 0; i < f.size(); ++i) f[i] = tv * v0[i] + (0.5 * tv * tv) * a[i];
  return out;
}

std::pair<FlowField, FlowField> scale_flow_linear(const FlowField& fwd, const FlowField& bwd,
                                                  TimeFraction n) {
  require_same_shape(fwd, bwd, "scale_flow_linear");
  FlowField f = fwd, b = bwd;
  for (Vec2& v : f.vectors()) v *= n.value();
  for (Vec2& v : b.vectors()) v *= 1.0 - n.value();
  return {std::move(f), std::move(b)};
}

}  // namespace quadinterp
