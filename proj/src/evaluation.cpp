#include "mpf/evaluation.hpp"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <numeric>
#include <stdexcept>

#include "json.hpp"
#include "mpf/errors.hpp"

namespace mpf::eval {

double f1_score(double precision, double recall) {
  return precision + recall > 0.0 ? 2.0 * precision * recall / (precision + recall) : 0.0;
}

namespace {

struct Outcome {
  double quality;
  bool correct;
  bool has_match;
};

std::vector<Outcome> outcomes(std::span<const seq::MatchDecision> decisions, const io::GroundTruth& gt) {
  std::vector<Outcome> out;
  out.reserve(decisions.size());
  for (const auto& d : decisions) {
    if (!gt.covers(d.query_id)) throw IngestError("no ground truth for query frame " + std::to_string(d.query_id));
    out.push_back({d.quality, gt.is_match(d.query_id, d.template_id), gt.has_true_match(d.query_id)});
  }
  return out;
}

Score finish(const Counts& c) {
  Score s;
  s.counts = c;
  const std::size_t accepted = c.true_positives + c.false_positives;
  const std::size_t matchable = c.true_positives + c.false_negatives;
  s.precision = accepted == 0 ? 1.0 : static_cast<double>(c.true_positives) / static_cast<double>(accepted);
  s.recall = matchable == 0 ? 1.0 : static_cast<double>(c.true_positives) / static_cast<double>(matchable);
  return s;
}

}  // namespace

Score score_decisions(std::span<const seq::MatchDecision> decisions, const io::GroundTruth& gt, double threshold) {
  Counts c;
  for (const auto& o : outcomes(decisions, gt)) {
    if (o.quality <= threshold) {
      (o.correct ? c.true_positives : c.false_positives) += 1;
    } else {
      (o.has_match ? c.false_negatives : c.true_negatives) += 1;
    }
  }
  return finish(c);
}

PRCurve sweep_pr(std::span<const seq::MatchDecision> decisions, const io::GroundTruth& gt) {
  auto all = outcomes(decisions, gt);
  std::sort(all.begin(), all.end(), [](const Outcome& a, const Outcome& b) { return a.quality < b.quality; });

  // Start with everything rejected and accept one quality level at a time.
  Counts c;
  for (const auto& o : all) (o.has_match ? c.false_negatives : c.true_negatives) += 1;

  PRCurve curve;
  std::size_t i = 0;
  while (i < all.size()) {
    const double threshold = all[i].quality;
    for (; i < all.size() && all[i].quality == threshold; ++i) {
      const Outcome& o = all[i];
      (o.has_match ? c.false_negatives : c.true_negatives) -= 1;
      (o.correct ? c.true_positives : c.false_positives) += 1;
    }
    const Score s = finish(c);
    curve.points.push_back({threshold, s.precision, s.recall});
    const double f1 = f1_score(s.precision, s.recall);
    if (f1 > curve.max_f1) {
      curve.max_f1 = f1;
      curve.max_f1_threshold = threshold;
    }
    if (s.precision == 1.0) curve.recall_at_full_precision = std::max(curve.recall_at_full_precision, s.recall);
  }
  return curve;
}

void write_pr_csv(const PRCurve& curve, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IngestError("cannot write " + path.string());
  out << "threshold,precision,recall\n" << std::setprecision(17);
  for (const auto& p : curve.points) out << p.threshold << ',' << p.precision << ',' << p.recall << '\n';
}

std::string pr_summary_json(const PRCurve& curve) {
  nlohmann::json j{{"max_f1", curve.max_f1},
                   {"max_f1_threshold", curve.max_f1_threshold},
                   {"recall_at_100_precision", curve.recall_at_full_precision},
                   {"points", curve.points.size()}};
  return j.dump(2);
}

}  // namespace mpf::eval
