#include "mpf/quality.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace mpf::seq {

double path_quality(std::span<const double> column, std::size_t at, std::size_t half_width) {
  if (column.size() <= 2 * half_width + 1) {
    throw std::invalid_argument("quality window of half-width " + std::to_string(half_width) + " swallows a column of " +
                                std::to_string(column.size()) + " templates");
  }
  if (at >= column.size()) throw std::out_of_range("path_quality: index outside column");
  const std::size_t lo = at > half_width ? at - half_width : 0;
  const std::size_t hi = std::min(column.size() - 1, at + half_width);
  double next = 0.0;
  bool found = false;
  for (std::size_t k = 0; k < column.size(); ++k) {
    if (k >= lo && k <= hi) continue;
    if (!found || column[k] > next) {
      next = column[k];
      found = true;
    }
  }
  return column[at] / next;
}

double column_quality(std::span<const double> column, std::size_t half_width) {
  if (column.empty()) throw std::invalid_argument("column_quality: empty column");
  const auto best = static_cast<std::size_t>(std::max_element(column.begin(), column.end()) - column.begin());
  return path_quality(column, best, half_width);
}

SequenceStart dynamic_sequence_start(std::span<const double> history, std::size_t min_length,
                                     std::size_t max_length, double threshold) {
  if (min_length == 0 || min_length > max_length) throw std::invalid_argument("invalid sequence length bounds");
  SequenceStart out;
  if (history.size() != max_length) return out;
  const std::size_t h = history.size();
  // Sequence length L = h - s must lie in [min_length, max_length]; dQ needs s >= 1.
  const std::size_t first = 1;
  if (h < min_length + first) return out;
  const std::size_t last = h - min_length;
  std::size_t best = first;
  double best_rate = history[first] - history[first - 1];
  for (std::size_t s = first + 1; s <= last; ++s) {
    const double rate = history[s] - history[s - 1];
    if (rate < best_rate) {
      best_rate = rate;
      best = s;
    }
  }
  out.rate_of_change = best_rate;
  if (best_rate < 0.0 && -best_rate >= threshold) {
    out.offset = best;
    out.triggered = true;
  }
  return out;
}

}  // namespace mpf::seq
