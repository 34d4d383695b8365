#pragma once

#include <cstdint>
#include <filesystem>

#include "quadinterp/types.hpp"

namespace quadinterp {

/// Reads an 8-bit grayscale or RGB PNG; intensities become v/255.
Frame load_frame(const std::filesystem::path& path);

/// Writes an 8-bit PNG (gray for 1 channel, RGB for 3).
void save_frame(const Frame& frame, const std::filesystem::path& path);

/// round(clamp(v,0,1) * 255), ties away from zero.
std::uint8_t quantize_to_byte(double v);

/// The frame exactly as it would read back after save_frame.
Frame quantize(const Frame& frame);

}  // namespace quadinterp
