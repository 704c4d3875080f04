#include "mpf/localizer.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "mpf/errors.hpp"
#include "mpf/quality.hpp"

namespace mpf::seq {

double LocalizerParams::observation_threshold(std::size_t channel) const {
  if (observation_thresholds.size() == 1) return observation_thresholds.front();
  return observation_thresholds.at(channel);
}

void LocalizerParams::validate(std::size_t channels) const {
  if (channels == 0) throw ConfigError("at least one channel is required");
  if (observation_thresholds.size() != 1 && observation_thresholds.size() != channels) {
    throw ConfigError("observation thresholds: give one value or one per channel");
  }
  for (double t : observation_thresholds) {
    if (!(t >= 0.0 && t <= 1.0 - transition.epsilon)) {
      throw ConfigError("observation threshold " + std::to_string(t) + " outside [0, 1 - epsilon]");
    }
  }
  if (min_sequence == 0 || min_sequence > max_sequence) throw ConfigError("need 1 <= min_sequence <= max_sequence");
  if (transition.min_offset > transition.max_offset) throw ConfigError("need min_velocity <= max_velocity");
  if (!(transition.epsilon > 0.0 && transition.epsilon < 0.5)) throw ConfigError("epsilon must lie in (0, 0.5)");
  if (!(quality_threshold >= 0.0)) throw ConfigError("quality threshold must be non-negative");
}

Localizer::Localizer(std::size_t templates, std::size_t channels, LocalizerParams params,
                     std::vector<int> template_ids)
    : templates_(templates), channels_(channels), params_(std::move(params)), template_ids_(std::move(template_ids)) {
  params_.validate(channels_);
  if (templates_ <= 2 * params_.quality_half_width + 1) {
    throw ConfigError("quality window half-width " + std::to_string(params_.quality_half_width) +
                      " needs more than " + std::to_string(2 * params_.quality_half_width + 1) + " templates, have " +
                      std::to_string(templates_));
  }
  if (template_ids_.empty()) {
    template_ids_.resize(templates_);
    std::iota(template_ids_.begin(), template_ids_.end(), 0);
  }
  if (template_ids_.size() != templates_) throw ConfigError("template id list does not match template count");
}

std::vector<double> Localizer::quality_history() const {
  std::vector<double> q;
  q.reserve(window_.size());
  for (const auto& f : window_) q.push_back(f.quality);
  return q;
}

MatchDecision Localizer::push(int query_id, std::span<const std::vector<double>> distances) {
  if (distances.size() != channels_) {
    throw std::invalid_argument("expected " + std::to_string(channels_) + " distance columns, got " +
                                std::to_string(distances.size()));
  }
  const double eps = params_.transition.epsilon;

  std::vector<hmm::ObservationColumn> observations;
  observations.reserve(channels_);
  std::vector<std::size_t> bests;
  for (std::size_t c = 0; c < channels_; ++c) {
    if (distances[c].size() != templates_) throw std::invalid_argument("distance column has the wrong length");
    observations.push_back(hmm::normalize_observation(distances[c], params_.observation_threshold(c), eps));
    const auto& v = observations.back().values;
    bests.push_back(static_cast<std::size_t>(std::max_element(v.begin(), v.end()) - v.begin()));
  }

  MatchDecision decision;
  decision.query_id = query_id;
  decision.channel_bests = bests;

  Frame frame;
  frame.id = query_id;
  if (params_.fusion_voting) decision.excluded_channel = vote_exclude_channel(bests, params_.consensus).excluded;
  std::vector<const hmm::ObservationColumn*> used;
  for (std::size_t c = 0; c < channels_; ++c) {
    if (decision.excluded_channel && *decision.excluded_channel == c) continue;
    used.push_back(&observations[c]);
    frame.contributors.push_back(c);
  }
  frame.emission = hmm::build_emission_column(used);
  frame.quality = column_quality(frame.emission, params_.quality_half_width);

  window_.push_back(std::move(frame));
  while (window_.size() > params_.max_sequence) window_.pop_front();

  std::size_t start = 0;
  if (params_.dynamic_length) {
    start = dynamic_sequence_start(quality_history(), params_.min_sequence, params_.max_sequence,
                                   params_.quality_threshold)
                .offset;
  }

  hmm::EmissionMatrix emissions(templates_);
  for (std::size_t i = start; i < window_.size(); ++i) emissions.push_back(window_[i].emission, window_[i].contributors);
  last_result_ = hmm::viterbi_decode(emissions, params_.transition);

  double total = 0.0;
  for (std::size_t t = 0; t < emissions.length(); ++t) {
    total += path_quality(emissions.column(t), last_result_.path[t], params_.quality_half_width);
  }
  decision.quality = total / static_cast<double>(emissions.length());
  decision.template_index = last_result_.path.back();
  decision.template_id = template_ids_[decision.template_index];
  decision.accepted = decision.quality <= params_.accept_threshold;
  decision.sequence_start_id = window_[start].id;
  decision.sequence_length = emissions.length();
  last_emissions_ = std::move(emissions);
  return decision;
}

}  // namespace mpf::seq
