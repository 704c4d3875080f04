#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "mpf/descriptor.hpp"
#include "mpf/tensor_file.hpp"

namespace mpf::features {

/// Location of one feature map's strongest activation.
struct Keypoint {
  int x = 0;
  int y = 0;

  friend bool operator==(const Keypoint&, const Keypoint&) = default;
};

/// One keypoint per feature map of a layer with the given map dimensions.
struct KeypointSet {
  std::vector<Keypoint> points;
  int height = 0;
  int width = 0;

  std::size_t maps() const noexcept { return points.size(); }
  friend bool operator==(const KeypointSet&, const KeypointSet&) = default;
};

/// Per-feature-map running mean and standard deviation of pooled activations.
///
/// Each image contributes its five pooled values per map. Standardisation
/// yields 0 while fewer than two images have been seen or the map's standard
/// deviation is zero.
class RunningStats {
 public:
  RunningStats() = default;
  explicit RunningStats(std::size_t maps);

  std::size_t maps() const noexcept { return mean_.size(); }
  std::uint64_t images() const noexcept { return images_; }
  double mean(std::size_t map) const { return mean_.at(map); }
  /// Population standard deviation of everything seen for this map.
  double stddev(std::size_t map) const;

  /// Adds one image; `pooled` holds `per_map` values for every map.
  void update(std::span<const float> pooled, std::size_t per_map);
  double standardize(std::size_t map, double value) const;

 private:
  std::vector<double> mean_;
  std::vector<double> m2_;
  std::vector<std::uint64_t> samples_;
  std::uint64_t images_ = 0;
};

inline constexpr std::size_t kPyramidCells = 5;

/// Per map: [global max, NW max, NE max, SW max, SE max], quadrants split at
/// floor(H/2), floor(W/2). When a dimension is 1 both halves span it.
DescriptorVector pyramid_pool(const io::FeatureMapSet& maps);

/// Pyramid pooling followed by running standardisation. Updates `stats` with
/// the current image before standardising it.
DescriptorVector cnn_pyramid_descriptor(const io::FeatureMapSet& maps, RunningStats& stats);

/// Argmax location per map; ties go to the smallest row-major index.
KeypointSet cnn_argmax_keypoints(const io::FeatureMapSet& maps);

/// Mean over maps of the Euclidean distance between corresponding keypoints.
double keypoint_distance(const KeypointSet& query, const KeypointSet& reference);

}  // namespace mpf::features
