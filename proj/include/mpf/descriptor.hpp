#pragma once

#include <vector>

namespace mpf {

/// One frame's fixed-length descriptor for a single channel.
using DescriptorVector = std::vector<float>;

}  // namespace mpf
