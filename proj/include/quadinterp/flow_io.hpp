#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "quadinterp/types.hpp"

namespace quadinterp {

/// Middlebury .flo tag, stored as a little-endian float32.
inline constexpr float kFlowMagic = 202021.25f;

/// Encodes a field as Middlebury .flo bytes: magic, int32 width, int32
/// height, then row-major interleaved float32 (u, v), all little-endian.
std::vector<std::uint8_t> encode_flow(const FlowField& field);

/// Decodes .flo bytes. Vectors with a component above 1e9 in magnitude
/// (the Middlebury "unknown" sentinel) come back as zero with valid=false.
FlowField decode_flow(std::span<const std::uint8_t> bytes, const std::string& origin = "<memory>");

FlowField read_flow(const std::filesystem::path& path);
void write_flow(const FlowField& field, const std::filesystem::path& path);

}  // namespace quadinterp
