#pragma once

#include <cstddef>
#include <deque>
#include <optional>
#include <span>
#include <vector>

#include "mpf/observation.hpp"
#include "mpf/viterbi.hpp"
#include "mpf/voting.hpp"

namespace mpf::seq {

struct LocalizerParams {
  /// Observation floor threshold; one value for all channels or one per channel.
  std::vector<double> observation_thresholds{0.5};
  std::size_t quality_half_width = 10;
  std::size_t min_sequence = 5;
  std::size_t max_sequence = 20;
  /// Minimum quality drop that moves the sequence start.
  double quality_threshold = 0.1;
  /// Decisions with averaged quality at or below this are accepted.
  double accept_threshold = 0.1;
  ConsensusMode consensus = ConsensusMode::median;
  /// Per-frame channel voting (multi-process fusion).
  bool fusion_voting = true;
  /// When false, every decode uses the full window of up to max_sequence frames.
  bool dynamic_length = true;
  hmm::TransitionModel transition{};

  double observation_threshold(std::size_t channel) const;
  /// Throws ConfigError.
  void validate(std::size_t channels) const;
};

/// Localisation output for one query frame.
struct MatchDecision {
  int query_id = 0;
  std::size_t template_index = 0;
  /// Reference frame id of the matched template.
  int template_id = 0;
  /// Averaged post-decode quality; lower is more confident.
  double quality = 0.0;
  bool accepted = false;
  /// Query frame id where the decoded sequence begins.
  int sequence_start_id = 0;
  std::size_t sequence_length = 0;
  std::optional<std::size_t> excluded_channel;
  std::vector<std::size_t> channel_bests;
};

/// Rolling-window sequence matcher.
///
/// Each pushed query frame is normalised per channel, voted on, fused into one
/// emission column and scored for quality. The window (up to max_sequence
/// frames) is then trimmed to its dynamic start, decoded with Viterbi, and the
/// decoded path is rescored to produce the averaged quality.
class Localizer {
 public:
  /// `template_ids` maps template indices to reference frame ids (identity when empty).
  Localizer(std::size_t templates, std::size_t channels, LocalizerParams params, std::vector<int> template_ids = {});

  /// `distances` holds one distance column (length = templates) per channel.
  MatchDecision push(int query_id, std::span<const std::vector<double>> distances);

  const LocalizerParams& params() const noexcept { return params_; }
  /// Emission matrix and Viterbi result of the most recent decode.
  const hmm::EmissionMatrix& last_emissions() const noexcept { return last_emissions_; }
  const hmm::ViterbiResult& last_result() const noexcept { return last_result_; }
  std::vector<double> quality_history() const;

 private:
  struct Frame {
    int id = 0;
    std::vector<double> emission;
    std::vector<std::size_t> contributors;
    double quality = 0.0;
  };

  std::size_t templates_;
  std::size_t channels_;
  LocalizerParams params_;
  std::vector<int> template_ids_;
  std::deque<Frame> window_;
  hmm::EmissionMatrix last_emissions_;
  hmm::ViterbiResult last_result_;
};

}  // namespace mpf::seq
