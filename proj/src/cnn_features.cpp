#include "mpf/cnn_features.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace mpf::features {

RunningStats::RunningStats(std::size_t maps) : mean_(maps, 0.0), m2_(maps, 0.0), samples_(maps, 0) {}

double RunningStats::stddev(std::size_t map) const {
  const auto n = samples_.at(map);
  return n == 0 ? 0.0 : std::sqrt(m2_[map] / static_cast<double>(n));
}

void RunningStats::update(std::span<const float> pooled, std::size_t per_map) {
  if (per_map == 0 || pooled.size() % per_map != 0) throw std::invalid_argument("RunningStats: ragged input");
  const std::size_t maps = pooled.size() / per_map;
  if (mean_.empty()) *this = RunningStats(maps);
  if (maps != mean_.size()) throw std::invalid_argument("RunningStats: feature map count changed");
  for (std::size_t f = 0; f < maps; ++f) {
    for (std::size_t j = 0; j < per_map; ++j) {
      const double v = pooled[f * per_map + j];
      const auto n = ++samples_[f];
      const double delta = v - mean_[f];
      mean_[f] += delta / static_cast<double>(n);
      m2_[f] += delta * (v - mean_[f]);
    }
  }
  ++images_;
}

double RunningStats::standardize(std::size_t map, double value) const {
  if (images_ < 2) return 0.0;
  const double sd = stddev(map);
  if (!(sd > 0.0)) return 0.0;
  return (value - mean_[map]) / sd;
}

namespace {

void require_maps(const io::FeatureMapSet& maps) {
  if (maps.maps == 0 || maps.height == 0 || maps.width == 0 || maps.values.empty()) {
    throw std::invalid_argument("empty feature map set");
  }
}

float region_max(const io::FeatureMapSet& m, std::size_t f, std::size_t y0, std::size_t y1, std::size_t x0,
                 std::size_t x1) {
  float best = -std::numeric_limits<float>::infinity();
  for (std::size_t y = y0; y < y1; ++y)
    for (std::size_t x = x0; x < x1; ++x) best = std::max(best, m.at(f, y, x));
  return best;
}

}  // namespace

DescriptorVector pyramid_pool(const io::FeatureMapSet& maps) {
  require_maps(maps);
  const std::size_t h = maps.height;
  const std::size_t w = maps.width;
  const std::size_t hs = h / 2;
  const std::size_t ws = w / 2;
  // Split rows [0, north_end) / [south_begin, h); same for columns.
  const std::size_t north_end = hs == 0 ? h : hs;
  const std::size_t south_begin = hs == 0 ? 0 : hs;
  const std::size_t west_end = ws == 0 ? w : ws;
  const std::size_t east_begin = ws == 0 ? 0 : ws;

  DescriptorVector out;
  out.reserve(maps.maps * kPyramidCells);
  for (std::size_t f = 0; f < maps.maps; ++f) {
    out.push_back(region_max(maps, f, 0, h, 0, w));
    out.push_back(region_max(maps, f, 0, north_end, 0, west_end));
    out.push_back(region_max(maps, f, 0, north_end, east_begin, w));
    out.push_back(region_max(maps, f, south_begin, h, 0, west_end));
    out.push_back(region_max(maps, f, south_begin, h, east_begin, w));
  }
  return out;
}

DescriptorVector cnn_pyramid_descriptor(const io::FeatureMapSet& maps, RunningStats& stats) {
  DescriptorVector pooled = pyramid_pool(maps);
  stats.update(pooled, kPyramidCells);
  for (std::size_t i = 0; i < pooled.size(); ++i) {
    pooled[i] = static_cast<float>(stats.standardize(i / kPyramidCells, pooled[i]));
  }
  return pooled;
}

KeypointSet cnn_argmax_keypoints(const io::FeatureMapSet& maps) {
  require_maps(maps);
  KeypointSet out;
  out.height = static_cast<int>(maps.height);
  out.width = static_cast<int>(maps.width);
  out.points.reserve(maps.maps);
  for (std::size_t f = 0; f < maps.maps; ++f) {
    const auto m = maps.map(f);
    // max_element returns the first maximum, i.e. the smallest row-major index.
    const auto idx = static_cast<std::size_t>(std::max_element(m.begin(), m.end()) - m.begin());
    out.points.push_back({static_cast<int>(idx % maps.width), static_cast<int>(idx / maps.width)});
  }
  return out;
}

double keypoint_distance(const KeypointSet& query, const KeypointSet& reference) {
  if (query.maps() != reference.maps()) throw std::invalid_argument("keypoint sets have different map counts");
  if (query.height != reference.height || query.width != reference.width) {
    throw std::invalid_argument("keypoint sets come from different map sizes");
  }
  if (query.points.empty()) throw std::invalid_argument("empty keypoint set");
  double sum = 0.0;
  for (std::size_t f = 0; f < query.maps(); ++f) {
    const double dx = reference.points[f].x - query.points[f].x;
    const double dy = reference.points[f].y - query.points[f].y;
    sum += std::sqrt(dx * dx + dy * dy);
  }
  return sum / static_cast<double>(query.maps());
}

}  // namespace mpf::features
