#include "mpf/voting.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "mpf/errors.hpp"

namespace mpf::seq {

ConsensusMode parse_consensus_mode(std::string_view name) {
  if (name == "median") return ConsensusMode::median;
  if (name == "mean") return ConsensusMode::mean;
  throw ConfigError("unknown vote mode '" + std::string(name) + "' (expected median or mean)");
}

VoteRecord vote_exclude_channel(std::span<const std::size_t> bests, ConsensusMode mode) {
  VoteRecord r;
  r.bests.assign(bests.begin(), bests.end());
  if (bests.empty()) return r;

  if (mode == ConsensusMode::median) {
    std::vector<double> sorted(bests.begin(), bests.end());
    std::sort(sorted.begin(), sorted.end());
    const std::size_t m = sorted.size() / 2;
    r.consensus = sorted.size() % 2 == 1 ? sorted[m] : 0.5 * (sorted[m - 1] + sorted[m]);
  } else {
    double sum = 0.0;
    for (std::size_t b : bests) sum += static_cast<double>(b);
    r.consensus = sum / static_cast<double>(bests.size());
  }
  if (bests.size() < 3) return r;

  std::size_t worst = 0;
  double worst_distance = std::abs(static_cast<double>(bests[0]) - r.consensus);
  bool all_equal = true;
  for (std::size_t c = 1; c < bests.size(); ++c) {
    const double d = std::abs(static_cast<double>(bests[c]) - r.consensus);
    if (d != worst_distance) all_equal = false;
    if (d > worst_distance) {
      worst_distance = d;
      worst = c;
    }
  }
  r.excluded = worst;
  r.ambiguous = all_equal && worst_distance > 0.0;
  return r;
}

}  // namespace mpf::seq
