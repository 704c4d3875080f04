#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "mpf/ground_truth.hpp"
#include "mpf/localizer.hpp"

namespace mpf::eval {

struct Counts {
  std::size_t true_positives = 0;
  std::size_t false_positives = 0;
  std::size_t false_negatives = 0;
  /// Rejected queries of places with no true match.
  std::size_t true_negatives = 0;
};

struct Score {
  double precision = 1.0;
  double recall = 0.0;
  Counts counts;
};

double f1_score(double precision, double recall);

/// Scores decisions at acceptance threshold `threshold` (accept iff quality <= threshold).
///
/// accepted + correct -> TP, accepted + wrong -> FP, rejected with a true match -> FN,
/// rejected without one -> TN. Precision is 1 when nothing is accepted; recall is
/// 1 when no query has a true match.
Score score_decisions(std::span<const seq::MatchDecision> decisions, const io::GroundTruth& gt, double threshold);

struct PRPoint {
  double threshold = 0.0;
  double precision = 1.0;
  double recall = 0.0;
};

struct PRCurve {
  /// One point per distinct averaged quality, thresholds ascending.
  std::vector<PRPoint> points;
  double max_f1 = 0.0;
  double max_f1_threshold = 0.0;
  /// Largest recall among points with precision exactly 1.
  double recall_at_full_precision = 0.0;
};

PRCurve sweep_pr(std::span<const seq::MatchDecision> decisions, const io::GroundTruth& gt);

/// CSV with columns threshold,precision,recall.
void write_pr_csv(const PRCurve& curve, const std::filesystem::path& path);
/// JSON object with max_f1, max_f1_threshold, recall_at_100_precision and point count.
std::string pr_summary_json(const PRCurve& curve);

}  // namespace mpf::eval
