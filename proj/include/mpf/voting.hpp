#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace mpf::seq {

enum class ConsensusMode { median, mean };

ConsensusMode parse_consensus_mode(std::string_view name);

struct VoteRecord {
  /// Single-frame best template per channel.
  std::vector<std::size_t> bests;
  double consensus = 0.0;
  /// Set whenever at least three channels voted.
  std::optional<std::size_t> excluded;
  /// Every channel was equally far from the consensus, and that distance is nonzero.
  bool ambiguous = false;
};

/// Drops the channel whose single-frame hypothesis lies furthest from the
/// consensus template index. Ties go to the lowest channel index; with fewer
/// than three channels nothing is excluded.
VoteRecord vote_exclude_channel(std::span<const std::size_t> bests, ConsensusMode mode = ConsensusMode::median);

}  // namespace mpf::seq
