#pragma once

#include "mpf/descriptor.hpp"
#include "mpf/image.hpp"

namespace mpf::features {

struct SadParams {
  int width = 64;
  int height = 32;
  int patch = 8;
};

/// Patch-normalised thumbnail.
///
/// The image is bilinearly downsampled to width x height, split into
/// patch x patch tiles, and each tile is shifted to zero mean and scaled to unit
/// variance (a flat tile becomes all zeros). Output is the row-major thumbnail,
/// width * height values. Images smaller than the thumbnail are rejected.
DescriptorVector sad_descriptor(const GrayImage& img, const SadParams& params = {});

/// Patch normalisation of an already-downsampled thumbnail, in place.
void patch_normalize(GrayImage& thumb, int patch);

}  // namespace mpf::features
