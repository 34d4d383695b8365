#include "quadinterp/flow_io.hpp"

#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>

namespace quadinterp {

namespace {

constexpr std::size_t kHeaderBytes = 12;
constexpr double kUnknownFlow = 1e9;

template <typename T>
void put_le(std::vector<std::uint8_t>& out, T value) {
  static_assert(sizeof(T) == 4);
  std::uint32_t bits;
  std::memcpy(&bits, &value, 4);
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(bits >> (8 * i)));
}

template <typename T>
T get_le(std::span<const std::uint8_t> bytes, std::size_t offset) {
  static_assert(sizeof(T) == 4);
  std::uint32_t bits = 0;
  for (int i = 0; i < 4; ++i) bits |= static_cast<std::uint32_t>(bytes[offset + i]) << (8 * i);
  T value;
  std::memcpy(&value, &bits, 4);
  return value;
}

}  // namespace

std::vector<std::uint8_t> encode_flow(const FlowField& field) {
  std::vector<std::uint8_t> out;
  out.reserve(kHeaderBytes + field.pixel_count() * 8);
  put_le(out, kFlowMagic);
  put_le(out, static_cast<std::int32_t>(field.width()));
  put_le(out, static_cast<std::int32_t>(field.height()));
  for (const Vec2& v : field.vectors()) {
    put_le(out, static_cast<float>(v.x));
    put_le(out, static_cast<float>(v.y));
  }
  return out;
}

FlowField decode_flow(std::span<const std::uint8_t> bytes, const std::string& origin) {
  if (bytes.size() < kHeaderBytes) {
    throw FormatError("flow file " + origin + " is truncated (" + std::to_string(bytes.size()) +
                      " bytes, header needs 12)");
  }
  const float magic = get_le<float>(bytes, 0);
  if (magic != kFlowMagic) throw FormatError("flow file " + origin + " has a bad magic tag");
  const std::int32_t width = get_le<std::int32_t>(bytes, 4);
  const std::int32_t height = get_le<std::int32_t>(bytes, 8);
  if (width <= 0 || height <= 0) {
    throw FormatError("flow file " + origin + " declares nonpositive dimensions " +
                      std::to_string(width) + "x" + std::to_string(height));
  }
  const std::size_t count = static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
  if (bytes.size() < kHeaderBytes + count * 8) {
    throw FormatError("flow file " + origin + " is truncated: expected " +
                      std::to_string(kHeaderBytes + count * 8) + " bytes, found " +
                      std::to_string(bytes.size()));
  }

  FlowField field(width, height);
  auto vectors = field.vectors();
  auto valid = field.valid_mask();
  for (std::size_t i = 0; i < count; ++i) {
    const double u = get_le<float>(bytes, kHeaderBytes + 8 * i);
    const double v = get_le<float>(bytes, kHeaderBytes + 8 * i + 4);
    if (!std::isfinite(u) || !std::isfinite(v) || std::abs(u) > kUnknownFlow ||
        std::abs(v) > kUnknownFlow) {
      vectors[i] = {};
      valid[i] = 0;
    } else {
      vectors[i] = {u, v};
    }
  }
  return field;
}

FlowField read_flow(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open flow file: " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return decode_flow(bytes, path.string());
}

void write_flow(const FlowField& field, const std::filesystem::path& path) {
  const auto bytes = encode_flow(field);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open flow file for writing: " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("failed writing flow file: " + path.string());
}

}  // namespace quadinterp
