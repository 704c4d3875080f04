#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace mpf {

/// Single-channel raster, row-major. Loaded frames hold 8-bit intensities in [0, 255].
struct GrayImage {
  int width = 0;
  int height = 0;
  std::vector<double> pixels;

  GrayImage() = default;
  GrayImage(int w, int h, double fill = 0.0);

  bool empty() const noexcept { return pixels.empty(); }
  double& at(int x, int y) { return pixels[static_cast<std::size_t>(y) * width + x]; }
  double at(int x, int y) const { return pixels[static_cast<std::size_t>(y) * width + x]; }
};

/// Luma conversion of interleaved RGB bytes using 0.299/0.587/0.114, rounded to 8 bits.
GrayImage luma_from_rgb(std::span<const std::uint8_t> rgb, int width, int height);

/// Bilinear resampling with pixel-centre alignment and clamped borders.
GrayImage resize_bilinear(const GrayImage& src, int width, int height);

}  // namespace mpf
