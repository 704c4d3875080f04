#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string_view>
#include <vector>

namespace mpf::io {

// SQFT tensor files: the interchange format with the offline CNN extractor.
//
//   offset  size        field
//   0       8           magic "SQFTENS1"
//   8       4           maps   (uint32, little-endian)
//   12      4           height (uint32, little-endian)
//   16      4           width  (uint32, little-endian)
//   20      F*H*W*4     float32 little-endian, map-major then row-major
//
// The file ends exactly after the payload.

inline constexpr std::string_view kTensorMagic = "SQFTENS1";
inline constexpr std::size_t kTensorHeaderBytes = 20;

/// A stack of F feature maps of H x W activations.
struct FeatureMapSet {
  std::uint32_t maps = 0;
  std::uint32_t height = 0;
  std::uint32_t width = 0;
  std::vector<float> values;

  FeatureMapSet() = default;
  FeatureMapSet(std::uint32_t f, std::uint32_t h, std::uint32_t w, float fill = 0.0f);

  std::size_t map_size() const noexcept { return static_cast<std::size_t>(height) * width; }
  std::span<const float> map(std::size_t f) const {
    return std::span<const float>(values).subspan(f * map_size(), map_size());
  }
  float& at(std::size_t f, std::size_t y, std::size_t x) { return values[f * map_size() + y * width + x]; }
  float at(std::size_t f, std::size_t y, std::size_t x) const { return values[f * map_size() + y * width + x]; }
};

std::vector<std::byte> encode_tensor(const FeatureMapSet& set);
/// Throws FormatError on bad magic, zero or overflowing dims, truncation or trailing bytes.
FeatureMapSet decode_tensor(std::span<const std::byte> bytes);

void write_tensor(const FeatureMapSet& set, const std::filesystem::path& path);
FeatureMapSet read_tensor(const std::filesystem::path& path);

}  // namespace mpf::io
