#include "mpf/observation.hpp"

#include <algorithm>
#include <stdexcept>

namespace mpf::hmm {

ObservationColumn normalize_observation(std::span<const double> distances, double threshold, double epsilon) {
  if (distances.size() < 2) throw std::invalid_argument("normalize_observation needs at least two templates");
  for (double d : distances) {
    if (!std::isfinite(d)) throw std::invalid_argument("normalize_observation: non-finite distance");
  }
  const auto [lo, hi] = std::minmax_element(distances.begin(), distances.end());
  const double min_d = *lo;
  const double max_d = *hi;
  ObservationColumn out;
  out.values.assign(distances.size(), epsilon);
  if (max_d == min_d) {
    out.degenerate = true;
    return out;
  }
  const double range = max_d - min_d;
  const double floor_below = std::max(threshold, epsilon);
  for (std::size_t k = 0; k < distances.size(); ++k) {
    const double o = (max_d - distances[k]) / range - epsilon;
    if (o >= floor_below) out.values[k] = o;
  }
  return out;
}

std::vector<double> build_emission_column(std::span<const ObservationColumn* const> observations) {
  if (observations.empty()) throw std::invalid_argument("emission column needs at least one observation");
  const std::size_t n = observations.front()->values.size();
  std::vector<double> out(n, 0.0);
  for (const ObservationColumn* obs : observations) {
    if (obs->values.size() != n) throw std::invalid_argument("observation columns differ in length");
    for (std::size_t k = 0; k < n; ++k) out[k] += std::log(obs->values[k]);
  }
  return out;
}

void TransitionModel::validate() const {
  if (min_offset > max_offset) throw std::invalid_argument("transition band: min_offset > max_offset");
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw std::invalid_argument("transition epsilon must lie in (0, 1)");
}

}  // namespace mpf::hmm
