#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "mpf/ground_truth.hpp"
#include "mpf/template_database.hpp"

namespace mpf::eval {

/// Half-open range of query frames [begin, end).
struct Segment {
  std::size_t begin = 0;
  std::size_t end = 0;

  bool contains(std::size_t i) const noexcept { return i >= begin && i < end; }
};

struct VelocitySegment {
  Segment frames;
  /// Reference templates advanced per query frame.
  double velocity = 1.0;
};

/// Templates [target, target + length) repeat the appearance of [source, source + length).
struct AliasedPair {
  std::size_t source = 0;
  std::size_t target = 0;
  std::size_t length = 0;
};

/// Description of a seeded synthetic reference/query traverse pair.
///
/// Each channel observes its own smooth AR(1) appearance process along the
/// route. Reference descriptors add `reference_noise`; the query samples the
/// process at its (interpolated) route position and adds `query_noise`.
/// Corrupted frames replace a channel's descriptor with unrelated noise; novel
/// frames come from a separate, unmapped route for every channel.
struct SyntheticWorld {
  std::size_t channels = 4;
  std::size_t dimension = 64;
  std::size_t templates = 400;
  /// 0 means one query frame per template.
  std::size_t query_frames = 0;
  double start_position = 0.0;
  double default_velocity = 1.0;
  std::vector<VelocitySegment> velocity;
  /// AR(1) coefficient between consecutive templates.
  double smoothness = 0.8;
  double reference_noise = 0.1;
  double query_noise = 0.3;
  /// Per channel, the query frames where that channel outputs noise.
  std::vector<std::vector<Segment>> corruption;
  std::vector<Segment> novel;
  std::vector<AliasedPair> aliased;
  /// Frame-offset ground-truth tolerance.
  double tolerance = 10.0;
  double max_velocity = 5.0;
  std::uint64_t seed = 1;

  std::size_t query_count() const noexcept { return query_frames == 0 ? templates : query_frames; }
  double velocity_at(std::size_t frame) const;
  /// Throws ConfigError; rejects frames corrupted in every channel at once.
  void validate() const;
};

struct SyntheticTraverse {
  TemplateDatabase database;
  std::vector<int> query_ids;
  /// [query frame][channel]
  std::vector<std::vector<FrameDescriptor>> query;
  /// Route position of each query frame in template units (novel frames included).
  std::vector<double> positions;
  io::GroundTruth ground_truth;
};

SyntheticTraverse generate_synthetic(const SyntheticWorld& world);

}  // namespace mpf::eval
