#pragma once

#include "quadinterp/types.hpp"

namespace quadinterp {

struct FlowEstimatorConfig {
  int pyramid_levels = 4;
  int iterations_per_level = 3;
  /// Half-size of the square least-squares window.
  int window_radius = 7;
  /// Added to the diagonal of the local structure tensor.
  double regularization = 1e-4;

  void validate() const;
};

/// Dense coarse-to-fine local least-squares flow: returns f with
/// dst(p + f(p)) ~ src(p).
///
/// Each pyramid level (binomial blur + 2x2 averaging) refines the flow
/// upsampled from the coarser level. An iteration warps `dst` by the current
/// flow, accumulates the structure tensor of the averaged src/warped
/// gradients and the temporal residual over the window (summed across
/// channels), and solves the regularized 2x2 normal equations for an
/// increment. Windows are truncated at the border; warping clamps to the
/// edge. The result is deterministic and every pixel is marked valid.
FlowField estimate_flow(const Frame& src, const Frame& dst, const FlowEstimatorConfig& cfg = {});

}  // namespace quadinterp
