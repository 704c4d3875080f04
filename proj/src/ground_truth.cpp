#include "mpf/ground_truth.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <string>

#include "csv.hpp"
#include "mpf/errors.hpp"

namespace mpf::io {

GroundTruthMode parse_ground_truth_mode(std::string_view name) {
  if (name == "frame-offset" || name == "frames") return GroundTruthMode::frame_offset;
  if (name == "metric" || name == "meters") return GroundTruthMode::metric;
  throw ConfigError("unknown ground-truth mode '" + std::string(name) + "' (expected frame-offset or metric)");
}

std::string_view to_string(GroundTruthMode mode) {
  return mode == GroundTruthMode::frame_offset ? "frame-offset" : "metric";
}

GroundTruth::GroundTruth(GroundTruthMode mode, double tolerance) : mode_(mode), tolerance_(tolerance) {
  if (!(tolerance > 0.0) || !std::isfinite(tolerance)) {
    throw ConfigError("ground-truth tolerance must be positive, got " + std::to_string(tolerance));
  }
}

GroundTruth GroundTruth::frame_offset(std::map<int, std::optional<int>> correspondence, double tolerance) {
  GroundTruth gt(GroundTruthMode::frame_offset, tolerance);
  gt.correspondence_ = std::move(correspondence);
  return gt;
}

GroundTruth GroundTruth::metric(std::map<int, PlanarPosition> query, std::map<int, PlanarPosition> reference,
                                double tolerance) {
  GroundTruth gt(GroundTruthMode::metric, tolerance);
  for (const auto* m : {&query, &reference}) {
    for (const auto& [id, p] : *m) {
      if (!std::isfinite(p.x) || !std::isfinite(p.y)) {
        throw IngestError("non-finite coordinates for frame " + std::to_string(id));
      }
    }
  }
  gt.query_ = std::move(query);
  gt.reference_ = std::move(reference);
  return gt;
}

bool GroundTruth::covers(int query_id) const {
  return mode_ == GroundTruthMode::frame_offset ? correspondence_.contains(query_id) : query_.contains(query_id);
}

bool GroundTruth::is_match(int query_id, int reference_id) const {
  if (mode_ == GroundTruthMode::frame_offset) {
    const auto it = correspondence_.find(query_id);
    if (it == correspondence_.end()) throw IngestError("no ground truth for query frame " + std::to_string(query_id));
    if (!it->second) return false;
    return std::abs(static_cast<double>(*it->second) - reference_id) <= tolerance_;
  }
  const auto q = query_.find(query_id);
  if (q == query_.end()) throw IngestError("no ground truth for query frame " + std::to_string(query_id));
  const auto r = reference_.find(reference_id);
  if (r == reference_.end()) {
    throw IngestError("no ground truth for reference frame " + std::to_string(reference_id));
  }
  return std::hypot(q->second.x - r->second.x, q->second.y - r->second.y) <= tolerance_;
}

bool GroundTruth::has_true_match(int query_id) const {
  if (mode_ == GroundTruthMode::frame_offset) {
    const auto it = correspondence_.find(query_id);
    if (it == correspondence_.end()) throw IngestError("no ground truth for query frame " + std::to_string(query_id));
    return it->second.has_value();
  }
  const auto q = query_.find(query_id);
  if (q == query_.end()) throw IngestError("no ground truth for query frame " + std::to_string(query_id));
  for (const auto& [id, p] : reference_) {
    if (std::hypot(q->second.x - p.x, q->second.y - p.y) <= tolerance_) return true;
  }
  return false;
}

namespace {

std::size_t require(const detail::CsvTable& t, std::string_view name, const std::filesystem::path& path) {
  const auto c = t.column(name);
  if (!c) throw IngestError(path.string() + ": missing column '" + std::string(name) + "'");
  return *c;
}

void check_increasing(int previous, int current, bool first, const std::filesystem::path& path, std::size_t line) {
  if (!first && current <= previous) {
    throw IngestError(path.string() + ":" + std::to_string(line) + ": frame ids must be strictly increasing");
  }
}

}  // namespace

GroundTruth load_ground_truth(const std::filesystem::path& path, GroundTruthMode mode, double tolerance) {
  const auto table = detail::read_csv(path);
  const auto where = [&](std::size_t row) { return path.string() + ":" + std::to_string(table.line_numbers[row]); };

  if (mode == GroundTruthMode::frame_offset) {
    const auto qc = require(table, "query_id", path);
    const auto rc = require(table, "ref_id", path);
    std::map<int, std::optional<int>> corr;
    int prev = 0;
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
      const auto& row = table.rows[i];
      const int q = static_cast<int>(detail::parse_int(row[qc], where(i) + " query_id"));
      check_increasing(prev, q, i == 0, path, table.line_numbers[i]);
      prev = q;
      std::optional<int> ref;
      if (!row[rc].empty()) {
        const auto r = detail::parse_int(row[rc], where(i) + " ref_id");
        if (r >= 0) ref = static_cast<int>(r);
      }
      corr.emplace(q, ref);
    }
    return GroundTruth::frame_offset(std::move(corr), tolerance);
  }

  const auto fc = require(table, "frame_id", path);
  const auto xc = require(table, "x", path);
  const auto yc = require(table, "y", path);
  const auto tc = table.column("traverse");
  std::map<int, PlanarPosition> query;
  std::map<int, PlanarPosition> reference;
  int prev_query = 0;
  int prev_ref = 0;
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    const auto& row = table.rows[i];
    if (row[xc].empty() || row[yc].empty()) throw IngestError(where(i) + ": missing coordinates");
    const int id = static_cast<int>(detail::parse_int(row[fc], where(i) + " frame_id"));
    const PlanarPosition p{detail::parse_double(row[xc], where(i) + " x"),
                           detail::parse_double(row[yc], where(i) + " y")};
    if (!std::isfinite(p.x) || !std::isfinite(p.y)) throw IngestError(where(i) + ": non-finite coordinates");
    const std::string traverse = tc ? row[*tc] : std::string("both");
    if (traverse == "query" || traverse == "both") {
      check_increasing(prev_query, id, query.empty(), path, table.line_numbers[i]);
      prev_query = id;
      query.emplace(id, p);
    }
    if (traverse == "ref" || traverse == "reference" || traverse == "both") {
      check_increasing(prev_ref, id, reference.empty(), path, table.line_numbers[i]);
      prev_ref = id;
      reference.emplace(id, p);
    }
    if (traverse != "query" && traverse != "ref" && traverse != "reference" && traverse != "both") {
      throw IngestError(where(i) + ": unknown traverse '" + traverse + "'");
    }
  }
  if (query.empty() || reference.empty()) throw IngestError(path.string() + ": metric ground truth needs both traverses");
  return GroundTruth::metric(std::move(query), std::move(reference), tolerance);
}

void write_ground_truth(const GroundTruth& gt, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IngestError("cannot write " + path.string());
  if (gt.mode() == GroundTruthMode::frame_offset) {
    out << "query_id,ref_id\n";
    for (const auto& [q, r] : gt.correspondence()) {
      out << q << ',';
      if (r) out << *r;
      out << '\n';
    }
  } else {
    out.precision(17);
    out << "traverse,frame_id,x,y\n";
    for (const auto& [id, p] : gt.query_positions()) out << "query," << id << ',' << p.x << ',' << p.y << '\n';
    for (const auto& [id, p] : gt.reference_positions()) out << "ref," << id << ',' << p.x << ',' << p.y << '\n';
  }
  if (!out) throw IngestError("failed writing " + path.string());
}

}  // namespace mpf::io
