#include "mpf/decisions_csv.hpp"

#include <fstream>
#include <iomanip>

#include "csv.hpp"
#include "mpf/errors.hpp"

namespace mpf::seq {

void write_decisions_csv(std::span<const MatchDecision> decisions, std::span<const std::string> channel_names,
                         const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IngestError("cannot write " + path.string());
  out << kDecisionsSchema << '\n'
      << "query_id,template_id,template_index,quality,accepted,sequence_start,sequence_length,excluded_channel";
  for (const auto& name : channel_names) out << ",best_" << name;
  out << '\n' << std::setprecision(17);
  for (const auto& d : decisions) {
    if (d.channel_bests.size() != channel_names.size()) {
      throw std::invalid_argument("decision channel count does not match the channel names");
    }
    out << d.query_id << ',' << d.template_id << ',' << d.template_index << ',' << d.quality << ','
        << (d.accepted ? 1 : 0) << ',' << d.sequence_start_id << ',' << d.sequence_length << ',';
    if (d.excluded_channel) out << channel_names[*d.excluded_channel];
    for (std::size_t b : d.channel_bests) out << ',' << b;
    out << '\n';
  }
  if (!out) throw IngestError("failed writing " + path.string());
}

std::vector<MatchDecision> read_decisions_csv(const std::filesystem::path& path) {
  {
    std::ifstream in(path);
    std::string first;
    if (!in || !std::getline(in, first)) throw IngestError("cannot read decisions file " + path.string());
    if (first.rfind(kDecisionsSchema, 0) != 0) throw IngestError(path.string() + ": not an mpf-decisions v1 file");
  }
  const auto table = detail::read_csv(path);
  const char* required[] = {"query_id", "template_id", "template_index", "quality", "accepted",
                            "sequence_start", "sequence_length", "excluded_channel"};
  std::vector<std::size_t> cols;
  for (const char* name : required) {
    const auto c = table.column(name);
    if (!c) throw IngestError(path.string() + ": missing column '" + name + "'");
    cols.push_back(*c);
  }
  std::vector<std::string> channels;
  std::vector<std::size_t> best_cols;
  for (std::size_t i = 0; i < table.header.size(); ++i) {
    if (table.header[i].rfind("best_", 0) == 0) {
      channels.push_back(table.header[i].substr(5));
      best_cols.push_back(i);
    }
  }

  std::vector<MatchDecision> out;
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    const std::string where = path.string() + ":" + std::to_string(table.line_numbers[r]);
    MatchDecision d;
    d.query_id = static_cast<int>(detail::parse_int(row[cols[0]], where));
    d.template_id = static_cast<int>(detail::parse_int(row[cols[1]], where));
    d.template_index = static_cast<std::size_t>(detail::parse_int(row[cols[2]], where));
    d.quality = detail::parse_double(row[cols[3]], where);
    d.accepted = detail::parse_int(row[cols[4]], where) != 0;
    d.sequence_start_id = static_cast<int>(detail::parse_int(row[cols[5]], where));
    d.sequence_length = static_cast<std::size_t>(detail::parse_int(row[cols[6]], where));
    const std::string& excluded = row[cols[7]];
    if (!excluded.empty()) {
      std::size_t c = 0;
      while (c < channels.size() && channels[c] != excluded) ++c;
      if (c == channels.size()) throw IngestError(where + ": unknown excluded channel '" + excluded + "'");
      d.excluded_channel = c;
    }
    for (std::size_t c : best_cols) d.channel_bests.push_back(static_cast<std::size_t>(detail::parse_int(row[c], where)));
    out.push_back(std::move(d));
  }
  return out;
}

}  // namespace mpf::seq
