#pragma once

#include <cstddef>
#include <span>

namespace mpf::seq {

/// Ratio of column[at] to the largest entry more than `half_width` templates
/// away from `at`. Entries are log-scores (negative), so a smaller ratio means a
/// more distinctive match. Requires column.size() > 2 * half_width + 1.
double path_quality(std::span<const double> column, std::size_t at, std::size_t half_width);

/// path_quality evaluated at the column's maximum (smallest index on ties).
double column_quality(std::span<const double> column, std::size_t half_width);

/// Where the HMM sequence starts inside the quality history window.
struct SequenceStart {
  /// Offset of the first frame of the sequence within the history (0 = whole window).
  std::size_t offset = 0;
  /// Most negative backward difference found among the candidate starts.
  double rate_of_change = 0.0;
  bool triggered = false;
};

/// Chooses the sequence start from a quality history, oldest entry first.
///
/// Only a history of exactly `max_length` frames is searched; shorter ones use
/// the whole window. Candidate starts s (with backward difference
/// dQ[s] = Q[s] - Q[s-1]) are those leaving a sequence of between `min_length`
/// and `max_length` frames. The start moves to the most negative dQ when its
/// magnitude reaches `threshold`; ties go to the earliest start.
SequenceStart dynamic_sequence_start(std::span<const double> history, std::size_t min_length,
                                     std::size_t max_length, double threshold);

}  // namespace mpf::seq
