#pragma once

#include <cstddef>

#include "mpf/descriptor.hpp"
#include "mpf/image.hpp"

namespace mpf::features {

struct HogParams {
  int width = 640;
  int height = 320;
  int cell = 32;
  int bins = 9;
  int block = 2;
  double epsilon = 1e-6;
};

/// Descriptor length for the given geometry: blocks_x * blocks_y * block^2 * bins.
std::size_t hog_length(const HogParams& params = {});

/// Histogram of oriented gradients over the whole frame.
///
/// The frame is resized to width x height, gradients use the centred [-1, 0, 1]
/// kernel with replicated borders, unsigned orientations vote into `bins` bins
/// centred on multiples of 180/bins degrees (linear split between the two
/// nearest), and every block of block x block cells (stride one cell) is L2
/// normalised as v / sqrt(|v|^2 + epsilon^2).
DescriptorVector hog_descriptor(const GrayImage& img, const HogParams& params = {});

}  // namespace mpf::features
