#pragma once

#include <cstdint>
#include <span>

#include "quadinterp/types.hpp"

namespace quadinterp {

enum class HoleFill {
  /// Repeatedly set each hole bordering valid pixels to the mean of its
  /// valid 8-neighbours until no hole remains.
  OutsideInAverage,
  /// Copy the closest valid pixel (chessboard distance, first found in
  /// breadth-first order).
  NearestValid,
};

enum class SplatKernel { Bilinear, Gaussian };

enum class OcclusionWeighting {
  /// w0 = 1 - t, w1 = t.
  TimeLinear,
  /// Time-linear weights, zeroed where the reversed flow had a hole.
  HoleMaskScaled,
};

struct WarpConfig {
  HoleFill hole_fill = HoleFill::OutsideInAverage;
  SplatKernel splat_kernel = SplatKernel::Bilinear;
  double gaussian_sigma = 1.0;
  OcclusionWeighting occlusion_weighting = OcclusionWeighting::TimeLinear;

  void validate() const;
};

/// Turns a source-anchored flow f(src->t) into a target-anchored f(t->src).
///
/// Every source pixel p splats -f(p) at p + f(p) with the configured kernel
/// and each target pixel takes the weighted mean of what it received.
/// Targets no interior source reached may still be covered by virtual
/// sources outside the frame, whose flow is extrapolated linearly from the
/// border; this handles content entering from off-screen. Targets with zero
/// weight from both are holes: they are marked invalid and then filled per
/// `cfg.hole_fill`.
FlowField reverse_flow(const FlowField& f_src_to_t, const WarpConfig& cfg = {});

/// output(p) = frame sampled bilinearly at p + f(p), edge-clamped.
Frame backward_warp(const Frame& frame, const FlowField& f_t_to_src);

/// Weighted blend of the two warped inputs at time t. `valid0`/`valid1` are
/// per-pixel validity masks (nonzero = not a hole), typically the reversed
/// flows' valid masks.
Frame synthesize(const Frame& warped0, const Frame& warped1, std::span<const std::uint8_t> valid0,
                 std::span<const std::uint8_t> valid1, TimeFraction t, const WarpConfig& cfg = {});

/// Per-pixel mean of the two bounding frames, used for every t.
Frame overlay_baseline(const Frame& first, const Frame& second);

}  // namespace quadinterp
