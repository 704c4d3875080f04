#include "mpf/image.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mpf {

GrayImage::GrayImage(int w, int h, double fill)
    : width(w), height(h), pixels(static_cast<std::size_t>(w) * h, fill) {
  if (w < 0 || h < 0) throw std::invalid_argument("negative image size");
}

GrayImage luma_from_rgb(std::span<const std::uint8_t> rgb, int width, int height) {
  const auto n = static_cast<std::size_t>(width) * height;
  if (rgb.size() != n * 3) throw std::invalid_argument("rgb buffer does not match image size");
  GrayImage out(width, height);
  for (std::size_t i = 0; i < n; ++i) {
    const double y = 0.299 * rgb[3 * i] + 0.587 * rgb[3 * i + 1] + 0.114 * rgb[3 * i + 2];
    out.pixels[i] = std::clamp(std::round(y), 0.0, 255.0);
  }
  return out;
}

namespace {

struct Tap {
  int lo;
  int hi;
  double frac;
};

std::vector<Tap> taps(int src, int dst) {
  std::vector<Tap> t(static_cast<std::size_t>(dst));
  const double scale = static_cast<double>(src) / dst;
  for (int i = 0; i < dst; ++i) {
    double pos = (i + 0.5) * scale - 0.5;
    pos = std::clamp(pos, 0.0, static_cast<double>(src - 1));
    const int lo = static_cast<int>(std::floor(pos));
    const int hi = std::min(lo + 1, src - 1);
    t[static_cast<std::size_t>(i)] = {lo, hi, pos - lo};
  }
  return t;
}

}  // namespace

GrayImage resize_bilinear(const GrayImage& src, int width, int height) {
  if (src.empty()) throw std::invalid_argument("cannot resize an empty image");
  if (width <= 0 || height <= 0) throw std::invalid_argument("target size must be positive");
  if (src.width == width && src.height == height) return src;

  const auto xs = taps(src.width, width);
  const auto ys = taps(src.height, height);
  GrayImage out(width, height);
  for (int y = 0; y < height; ++y) {
    const Tap& ty = ys[static_cast<std::size_t>(y)];
    for (int x = 0; x < width; ++x) {
      const Tap& tx = xs[static_cast<std::size_t>(x)];
      const double top = src.at(tx.lo, ty.lo) * (1.0 - tx.frac) + src.at(tx.hi, ty.lo) * tx.frac;
      const double bottom = src.at(tx.lo, ty.hi) * (1.0 - tx.frac) + src.at(tx.hi, ty.hi) * tx.frac;
      out.at(x, y) = top * (1.0 - ty.frac) + bottom * ty.frac;
    }
  }
  return out;
}

}  // namespace mpf
