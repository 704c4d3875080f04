#include "mpf/synthetic.hpp"

#include <cmath>
#include <map>
#include <optional>
#include <random>
#include <string>

#include "mpf/errors.hpp"

namespace mpf::eval {

double SyntheticWorld::velocity_at(std::size_t frame) const {
  for (const auto& v : velocity) {
    if (v.frames.contains(frame)) return v.velocity;
  }
  return default_velocity;
}

namespace {

bool in_any(const std::vector<Segment>& segments, std::size_t i) {
  for (const auto& s : segments) {
    if (s.contains(i)) return true;
  }
  return false;
}

}  // namespace

void SyntheticWorld::validate() const {
  if (channels == 0 || dimension == 0) throw ConfigError("synthetic world needs channels and a dimension");
  if (templates < 2) throw ConfigError("synthetic world needs at least two templates");
  if (!(smoothness >= 0.0 && smoothness < 1.0)) throw ConfigError("smoothness must lie in [0, 1)");
  if (!(reference_noise >= 0.0) || !(query_noise >= 0.0)) throw ConfigError("noise levels must be non-negative");
  if (!(tolerance > 0.0)) throw ConfigError("ground-truth tolerance must be positive");
  if (corruption.size() > channels) throw ConfigError("corruption given for more channels than exist");
  for (const auto& v : velocity) {
    if (!(v.velocity >= 0.0 && v.velocity <= max_velocity)) {
      throw ConfigError("velocity " + std::to_string(v.velocity) + " outside [0, " + std::to_string(max_velocity) + "]");
    }
  }
  if (!(default_velocity >= 0.0 && default_velocity <= max_velocity)) throw ConfigError("default velocity out of band");
  for (const auto& a : aliased) {
    if (a.source + a.length > templates || a.target + a.length > templates) {
      throw ConfigError("aliased segment runs past the last template");
    }
  }
  if (corruption.size() == channels) {
    for (std::size_t i = 0; i < query_count(); ++i) {
      bool all = true;
      for (const auto& segs : corruption) all = all && in_any(segs, i);
      if (all) throw ConfigError("query frame " + std::to_string(i) + " is corrupted in every channel");
    }
  }
}

SyntheticTraverse generate_synthetic(const SyntheticWorld& world) {
  world.validate();
  std::mt19937_64 rng(world.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  const std::size_t n = world.templates;
  const std::size_t d = world.dimension;
  const double rho = world.smoothness;
  const double innovation = std::sqrt(1.0 - rho * rho);

  const auto smooth_route = [&](std::size_t length) {
    std::vector<std::vector<double>> route(length, std::vector<double>(d));
    for (std::size_t i = 0; i < d; ++i) route[0][i] = normal(rng);
    for (std::size_t k = 1; k < length; ++k)
      for (std::size_t i = 0; i < d; ++i) route[k][i] = rho * route[k - 1][i] + innovation * normal(rng);
    return route;
  };

  const std::size_t q = world.query_count();
  std::vector<std::vector<std::vector<double>>> mapped(world.channels);
  std::vector<std::vector<std::vector<double>>> unmapped(world.channels);
  for (std::size_t c = 0; c < world.channels; ++c) {
    mapped[c] = smooth_route(n);
    for (const auto& a : world.aliased)
      for (std::size_t k = 0; k < a.length; ++k) mapped[c][a.target + k] = mapped[c][a.source + k];
    unmapped[c] = smooth_route(q);
  }

  SyntheticTraverse out{.database = {}, .query_ids = {}, .query = {}, .positions = {},
                        .ground_truth = io::GroundTruth::frame_offset({}, world.tolerance)};
  out.database.frame_ids.resize(n);
  for (std::size_t k = 0; k < n; ++k) out.database.frame_ids[k] = static_cast<int>(k);
  for (std::size_t c = 0; c < world.channels; ++c) {
    ChannelTemplates ch(ChannelSpec::parse("external:c" + std::to_string(c)));
    for (std::size_t k = 0; k < n; ++k) {
      DescriptorVector v(d);
      for (std::size_t i = 0; i < d; ++i) v[i] = static_cast<float>(mapped[c][k][i] + world.reference_noise * normal(rng));
      ch.add(std::move(v));
    }
    out.database.channels.push_back(std::move(ch));
  }

  std::map<int, std::optional<int>> correspondence;
  double position = world.start_position;
  std::size_t novel_step = 0;
  for (std::size_t i = 0; i < q; ++i) {
    const bool novel = in_any(world.novel, i);
    if (!novel && (position < 0.0 || position > static_cast<double>(n - 1))) {
      throw ConfigError("query frame " + std::to_string(i) + " leaves the mapped route (position " +
                        std::to_string(position) + ")");
    }
    std::vector<FrameDescriptor> frame;
    for (std::size_t c = 0; c < world.channels; ++c) {
      DescriptorVector v(d);
      const bool corrupted = c < world.corruption.size() && in_any(world.corruption[c], i);
      if (novel) {
        for (std::size_t j = 0; j < d; ++j) v[j] = static_cast<float>(unmapped[c][novel_step][j] + world.query_noise * normal(rng));
      } else if (corrupted) {
        for (std::size_t j = 0; j < d; ++j) v[j] = static_cast<float>(normal(rng));
      } else {
        const auto lo = static_cast<std::size_t>(std::floor(position));
        const std::size_t hi = std::min(lo + 1, n - 1);
        const double frac = position - static_cast<double>(lo);
        for (std::size_t j = 0; j < d; ++j) {
          const double base = (1.0 - frac) * mapped[c][lo][j] + frac * mapped[c][hi][j];
          v[j] = static_cast<float>(base + world.query_noise * normal(rng));
        }
      }
      frame.emplace_back(std::move(v));
    }
    out.query.push_back(std::move(frame));
    out.query_ids.push_back(static_cast<int>(i));
    out.positions.push_back(position);
    if (novel) {
      correspondence.emplace(static_cast<int>(i), std::nullopt);
      ++novel_step;
    } else {
      correspondence.emplace(static_cast<int>(i), static_cast<int>(std::lround(position)));
    }
    position += world.velocity_at(i);
  }
  out.ground_truth = io::GroundTruth::frame_offset(std::move(correspondence), world.tolerance);
  return out;
}

}  // namespace mpf::eval
