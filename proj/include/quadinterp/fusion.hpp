#pragma once

#include <memory>
#include <vector>

#include "quadinterp/pipeline.hpp"
#include "quadinterp/types.hpp"

namespace quadinterp {

/// Produces the per-pixel weight M in [0,1] given the full-resolution result
/// and the upsampled half-resolution result. Stands in for a learned mask
/// network with the same inputs.
class MaskProvider {
 public:
  virtual ~MaskProvider() = default;
  virtual std::vector<double> mask(const Frame& full, const Frame& low_up) const = 0;
};

/// M = c everywhere.
class ConstantMask final : public MaskProvider {
 public:
  explicit ConstantMask(double c = 1.0);
  std::vector<double> mask(const Frame& full, const Frame& low_up) const override;

 private:
  double c_;
};

/// M = 1 / (1 + lambda * mean_c |full - low_up|): trusts the full-resolution
/// result where the two scales agree.
class AgreementMask final : public MaskProvider {
 public:
  explicit AgreementMask(double lambda = 10.0);
  std::vector<double> mask(const Frame& full, const Frame& low_up) const override;

 private:
  double lambda_;
};

enum class MaskKind { Constant, Agreement };

struct FusionConfig {
  bool enabled = false;
  MaskKind kind = MaskKind::Agreement;
  double constant = 1.0;
  double lambda = 10.0;
};

std::unique_ptr<MaskProvider> make_mask_provider(const FusionConfig& cfg);

/// M * full + (1 - M) * low_up.
Frame fuse(const Frame& full, const Frame& low_up, const MaskProvider& provider);

struct TwoScaleResult {
  Frame full;
  Frame low_up;
};

/// Runs the single-scale pipeline at native resolution and on the 2x
/// downsampled window (flows downsampled with their vectors halved), then
/// upsamples the latter back to native size.
TwoScaleResult run_two_scale(const SequenceWindow& window, TimeFraction t, FlowSource& flows,
                             const PipelineConfig& cfg);

}  // namespace quadinterp
