#pragma once

#include "quadinterp/types.hpp"

namespace quadinterp {

/// Bilinear sample of channel `c` at real position (x, y), edge-clamped.
double sample_bilinear(const Frame& frame, double x, double y, int c);

/// Per-channel gradient magnitude. Central differences in the interior,
/// one-sided differences on the border rows/columns.
Frame edge_map(const Frame& frame);

/// Averages each 2x2 block; an odd trailing row/column is replicated.
/// Output is ceil(w/2) x ceil(h/2).
Frame downsample2(const Frame& frame);

/// Bilinear resample to (target_width, target_height), edge-clamped,
/// pixel-center aligned.
Frame upsample2(const Frame& frame, int target_width, int target_height);

/// Flow variants: same grid rules, and vectors are scaled by the
/// resolution ratio so displacements stay in the new grid's pixel units
/// (exactly 1/2 for downsample2). Downsampled validity is the AND of the
/// block; upsampled validity follows the nearest source pixel.
FlowField downsample2(const FlowField& flow);
FlowField upsample2(const FlowField& flow, int target_width, int target_height);

/// Separable 5-tap binomial blur [1 4 6 4 1]/16, edge-clamped.
Frame blur_binomial(const Frame& frame);

}  // namespace quadinterp
