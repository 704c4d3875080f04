#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "mpf/observation.hpp"

namespace mpf::hmm {

/// N templates x tau query frames of fused log-observations, stored column by column.
class EmissionMatrix {
 public:
  EmissionMatrix() = default;
  explicit EmissionMatrix(std::size_t templates) : templates_(templates) {}

  std::size_t templates() const noexcept { return templates_; }
  std::size_t length() const noexcept { return columns_.size(); }
  std::span<const double> column(std::size_t t) const { return columns_.at(t); }
  const std::vector<std::size_t>& contributors(std::size_t t) const { return contributors_.at(t); }
  double at(std::size_t k, std::size_t t) const { return columns_.at(t).at(k); }

  /// `contributors` records which channels were fused into the column.
  void push_back(std::vector<double> column, std::vector<std::size_t> contributors = {});

 private:
  std::size_t templates_ = 0;
  std::vector<std::vector<double>> columns_;
  std::vector<std::vector<std::size_t>> contributors_;
};

struct ViterbiResult {
  /// Template index per query frame, oldest first.
  std::vector<std::size_t> path;
  double score = 0.0;
  /// Accumulated scores and backpointers, [t][k].
  std::vector<std::vector<double>> scores;
  std::vector<std::vector<std::size_t>> backpointers;
};

/// One forward step: next[k] = max_j(prev[j] + T(j, k)) + emission[k], back[k] = argmax_j.
/// Scans only the in-band predecessors plus precomputed prefix/suffix maxima of
/// the out-of-band ones. Ties resolve to the smallest j.
void viterbi_step_banded(std::span<const double> prev, std::span<const double> emission,
                         const TransitionModel& model, std::span<double> next, std::span<std::size_t> back);

/// Same contract as viterbi_step_banded, evaluating every predecessor.
void viterbi_step_naive(std::span<const double> prev, std::span<const double> emission,
                        const TransitionModel& model, std::span<double> next, std::span<std::size_t> back);

/// Max-sum decode without an initial-state term: the first column of scores is
/// the first emission column. Terminal and intermediate ties go to the smallest index.
ViterbiResult viterbi_decode(const EmissionMatrix& emissions, const TransitionModel& model);

}  // namespace mpf::hmm
