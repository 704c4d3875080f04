#include "mpf/sad.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace mpf::features {

void patch_normalize(GrayImage& thumb, int patch) {
  if (patch <= 0 || thumb.width % patch != 0 || thumb.height % patch != 0) {
    throw std::invalid_argument("patch size " + std::to_string(patch) + " must divide the thumbnail size");
  }
  const double n = static_cast<double>(patch) * patch;
  for (int py = 0; py < thumb.height; py += patch) {
    for (int px = 0; px < thumb.width; px += patch) {
      double mean = 0.0;
      for (int y = py; y < py + patch; ++y)
        for (int x = px; x < px + patch; ++x) mean += thumb.at(x, y);
      mean /= n;
      double var = 0.0;
      for (int y = py; y < py + patch; ++y)
        for (int x = px; x < px + patch; ++x) var += (thumb.at(x, y) - mean) * (thumb.at(x, y) - mean);
      var /= n;
      // Relative floor: rounding noise on a flat tile must not be amplified to unit variance.
      const bool flat = var <= 1e-20 * std::max(1.0, mean * mean);
      const double inv = flat ? 0.0 : 1.0 / std::sqrt(var);
      for (int y = py; y < py + patch; ++y)
        for (int x = px; x < px + patch; ++x) thumb.at(x, y) = (thumb.at(x, y) - mean) * inv;
    }
  }
}

DescriptorVector sad_descriptor(const GrayImage& img, const SadParams& params) {
  if (img.empty()) throw std::invalid_argument("sad_descriptor: empty image");
  if (img.width < params.width || img.height < params.height) {
    throw std::invalid_argument("sad_descriptor: image " + std::to_string(img.width) + "x" +
                                std::to_string(img.height) + " is smaller than the " +
                                std::to_string(params.width) + "x" + std::to_string(params.height) + " thumbnail");
  }
  GrayImage thumb = resize_bilinear(img, params.width, params.height);
  patch_normalize(thumb, params.patch);
  return DescriptorVector(thumb.pixels.begin(), thumb.pixels.end());
}

}  // namespace mpf::features
