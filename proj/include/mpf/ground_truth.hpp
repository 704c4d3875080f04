#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string_view>

namespace mpf::io {

enum class GroundTruthMode { frame_offset, metric };

GroundTruthMode parse_ground_truth_mode(std::string_view name);
std::string_view to_string(GroundTruthMode mode);

struct PlanarPosition {
  double x = 0.0;
  double y = 0.0;
};

/// Decides whether a query frame was correctly matched to a reference frame.
///
/// frame-offset: each query id maps to a reference id (or to nothing for a
/// novel place); a match is correct when the ids differ by at most `tolerance`.
/// metric: both traverses carry planar positions in metres; a match is correct
/// when the positions are within `tolerance` of each other.
class GroundTruth {
 public:
  static GroundTruth frame_offset(std::map<int, std::optional<int>> correspondence, double tolerance);
  static GroundTruth metric(std::map<int, PlanarPosition> query, std::map<int, PlanarPosition> reference,
                            double tolerance);

  GroundTruthMode mode() const noexcept { return mode_; }
  double tolerance() const noexcept { return tolerance_; }

  bool covers(int query_id) const;
  /// Throws IngestError when the query has no ground-truth row.
  bool is_match(int query_id, int reference_id) const;
  /// Whether any reference frame is a correct match for this query.
  bool has_true_match(int query_id) const;

  const std::map<int, std::optional<int>>& correspondence() const noexcept { return correspondence_; }
  const std::map<int, PlanarPosition>& query_positions() const noexcept { return query_; }
  const std::map<int, PlanarPosition>& reference_positions() const noexcept { return reference_; }

 private:
  GroundTruth(GroundTruthMode mode, double tolerance);

  GroundTruthMode mode_;
  double tolerance_;
  std::map<int, std::optional<int>> correspondence_;
  std::map<int, PlanarPosition> query_;
  std::map<int, PlanarPosition> reference_;
};

/// Reads a ground-truth CSV.
///
/// frame-offset columns: query_id,ref_id  (an empty or negative ref_id marks a novel place)
/// metric columns:       [traverse,]frame_id,x,y  (traverse is "query" or "ref"; without it
///                       the same positions serve both traverses)
GroundTruth load_ground_truth(const std::filesystem::path& path, GroundTruthMode mode, double tolerance);

/// Writes the CSV that load_ground_truth reads back (metric mode uses the traverse column).
void write_ground_truth(const GroundTruth& gt, const std::filesystem::path& path);

}  // namespace mpf::io
