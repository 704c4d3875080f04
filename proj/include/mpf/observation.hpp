#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

namespace mpf::hmm {

/// Floor for normalised observations and the out-of-band transition weight.
inline constexpr double kEpsilon = 0.001;

/// One channel's normalised similarity to every template for one query frame.
struct ObservationColumn {
  std::vector<double> values;
  /// Set when every distance was equal; the column then carries no information.
  bool degenerate = false;
};

/// Rescales a distance column to [-epsilon, 1 - epsilon] with the best
/// (smallest) distance at 1 - epsilon, then floors every entry below
/// max(threshold, epsilon) to epsilon.
ObservationColumn normalize_observation(std::span<const double> distances, double threshold,
                                        double epsilon = kEpsilon);

/// Elementwise sum of natural logs of the contributing columns.
std::vector<double> build_emission_column(std::span<const ObservationColumn* const> observations);

/// Log-weight of moving between templates: 0 inside [min_offset, max_offset]
/// (offset = next - previous), log(epsilon) outside it.
struct TransitionModel {
  int min_offset = 0;
  int max_offset = 5;
  double epsilon = kEpsilon;

  void validate() const;
  double penalty() const { return std::log(epsilon); }
  bool in_band(std::size_t from, std::size_t to) const {
    const auto offset = static_cast<long long>(to) - static_cast<long long>(from);
    return offset >= min_offset && offset <= max_offset;
  }
  double operator()(std::size_t from, std::size_t to) const { return in_band(from, to) ? 0.0 : penalty(); }
};

inline double transition_term(std::size_t from, std::size_t to, const TransitionModel& model) {
  return model(from, to);
}

}  // namespace mpf::hmm
