#include "mpf/hog.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace mpf::features {

namespace {

void validate(const HogParams& p) {
  if (p.cell <= 0 || p.bins <= 0 || p.block <= 0 || p.width % p.cell != 0 || p.height % p.cell != 0) {
    throw std::invalid_argument("hog: cell size must divide the frame size");
  }
  if (p.width / p.cell < p.block || p.height / p.cell < p.block) {
    throw std::invalid_argument("hog: block larger than the cell grid");
  }
}

}  // namespace

std::size_t hog_length(const HogParams& p) {
  validate(p);
  const auto bx = static_cast<std::size_t>(p.width / p.cell - p.block + 1);
  const auto by = static_cast<std::size_t>(p.height / p.cell - p.block + 1);
  return bx * by * static_cast<std::size_t>(p.block * p.block * p.bins);
}

DescriptorVector hog_descriptor(const GrayImage& img, const HogParams& p) {
  validate(p);
  if (img.empty()) throw std::invalid_argument("hog_descriptor: empty image");
  for (double v : img.pixels) {
    if (!std::isfinite(v)) throw std::invalid_argument("hog_descriptor: non-finite pixel");
  }
  const GrayImage frame = resize_bilinear(img, p.width, p.height);

  const int cells_x = p.width / p.cell;
  const int cells_y = p.height / p.cell;
  std::vector<double> hist(static_cast<std::size_t>(cells_x) * cells_y * p.bins, 0.0);
  const double bin_width = std::numbers::pi / p.bins;

  for (int y = 0; y < p.height; ++y) {
    const int ym = std::max(y - 1, 0);
    const int yp = std::min(y + 1, p.height - 1);
    for (int x = 0; x < p.width; ++x) {
      const int xm = std::max(x - 1, 0);
      const int xp = std::min(x + 1, p.width - 1);
      const double gx = frame.at(xp, y) - frame.at(xm, y);
      const double gy = frame.at(x, yp) - frame.at(x, ym);
      const double mag = std::hypot(gx, gy);
      if (mag == 0.0) continue;
      double angle = std::atan2(gy, gx);
      if (angle < 0.0) angle += std::numbers::pi;
      if (angle >= std::numbers::pi) angle -= std::numbers::pi;
      const double pos = angle / bin_width;
      const int lo = static_cast<int>(std::floor(pos)) % p.bins;
      const int hi = (lo + 1) % p.bins;
      const double frac = pos - std::floor(pos);
      double* cell = &hist[(static_cast<std::size_t>(y / p.cell) * cells_x + x / p.cell) * p.bins];
      cell[lo] += mag * (1.0 - frac);
      cell[hi] += mag * frac;
    }
  }

  DescriptorVector out;
  out.reserve(hog_length(p));
  std::vector<double> block(static_cast<std::size_t>(p.block * p.block * p.bins));
  for (int by = 0; by + p.block <= cells_y; ++by) {
    for (int bx = 0; bx + p.block <= cells_x; ++bx) {
      std::size_t n = 0;
      for (int cy = by; cy < by + p.block; ++cy)
        for (int cx = bx; cx < bx + p.block; ++cx)
          for (int b = 0; b < p.bins; ++b) block[n++] = hist[(static_cast<std::size_t>(cy) * cells_x + cx) * p.bins + b];
      double sq = 0.0;
      for (double v : block) sq += v * v;
      const double scale = 1.0 / std::sqrt(sq + p.epsilon * p.epsilon);
      for (double v : block) out.push_back(static_cast<float>(v * scale));
    }
  }
  return out;
}

}  // namespace mpf::features
