#include "quadinterp/fusion.hpp"

#include <cmath>

#include "quadinterp/raster.hpp"

namespace quadinterp {

ConstantMask::ConstantMask(double c) : c_(c) {
  if (!(c >= 0.0 && c <= 1.0)) throw ConfigError("constant fusion mask must lie in [0,1]");
}

std::vector<double> ConstantMask::mask(const Frame& full, const Frame& low_up) const {
  require_same_shape(full, low_up, "fusion mask");
  return std::vector<double>(full.pixel_count(), c_);
}

AgreementMask::AgreementMask(double lambda) : lambda_(lambda) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw ConfigError("agreement lambda must be positive");
}

std::vector<double> AgreementMask::mask(const Frame& full, const Frame& low_up) const {
  require_same_shape(full, low_up, "fusion mask");
  const int nc = full.channels();
  const auto a = full.data();
  const auto b = low_up.data();
  std::vector<double> m(full.pixel_count());
  for (std::size_t p = 0; p < m.size(); ++p) {
    double diff = 0.0;
    for (int c = 0; c < nc; ++c) diff += std::abs(a[p * nc + c] - b[p * nc + c]);
    m[p] = 1.0 / (1.0 + lambda_ * diff / nc);
  }
  return m;
}

std::unique_ptr<MaskProvider> make_mask_provider(const FusionConfig& cfg) {
  if (cfg.kind == MaskKind::Constant) return std::make_unique<ConstantMask>(cfg.constant);
  return std::make_unique<AgreementMask>(cfg.lambda);
}

Frame fuse(const Frame& full, const Frame& low_up, const MaskProvider& provider) {
  require_same_shape(full, low_up, "fuse");
  const std::vector<double> m = provider.mask(full, low_up);
  if (m.size() != full.pixel_count()) throw DimensionError("fusion mask has the wrong size");
  const int nc = full.channels();
  Frame out(full.width(), full.height(), nc);
  const auto a = full.data();
  const auto b = low_up.data();
  auto dst = out.data();
  for (std::size_t p = 0; p < m.size(); ++p)
    for (int c = 0; c < nc; ++c) {
      const std::size_t i = p * nc + c;
      // Exact endpoints for M = 0 and M = 1.
      if (m[p] == 1.0) {
        dst[i] = a[i];
      } else if (m[p] == 0.0) {
        dst[i] = b[i];
      } else {
        dst[i] = m[p] * a[i] + (1.0 - m[p]) * b[i];
      }
    }
  return out;
}

TwoScaleResult run_two_scale(const SequenceWindow& window, TimeFraction t, FlowSource& flows,
                             const PipelineConfig& cfg) {
  window.validate();
  Frame full = interpolate_window(window, t, flows, cfg).frame;

  const std::size_t lo = window.has_before() ? window.first - 1 : window.first;
  const std::size_t hi = window.has_after() ? window.first + 2 : window.first + 1;
  std::vector<Frame> small(window.frames.size());
  for (std::size_t i = lo; i <= hi; ++i) small[i] = downsample2(window.frames[i]);

  PipelineConfig low_cfg = cfg;
  low_cfg.emit_edges = false;
  DownsampledFlowSource low_flows(flows);
  const SequenceWindow low_window{small, window.first};
  const Frame low = interpolate_window(low_window, t, low_flows, low_cfg).frame;
  Frame low_up = upsample2(low, full.width(), full.height());
  return {std::move(full), std::move(low_up)};
}

}  // namespace quadinterp
