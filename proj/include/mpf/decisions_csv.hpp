#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "mpf/localizer.hpp"

namespace mpf::seq {

/// First line of every decisions file.
inline constexpr const char* kDecisionsSchema = "# mpf-decisions v1";

/// Per-frame decisions and diagnostics, one row per query frame:
///
///   query_id,template_id,template_index,quality,accepted,sequence_start,
///   sequence_length,excluded_channel,best_<channel>...
///
/// excluded_channel is the channel name, empty when no channel was dropped;
/// best_<channel> is that channel's single-frame best template index.
void write_decisions_csv(std::span<const MatchDecision> decisions, std::span<const std::string> channel_names,
                         const std::filesystem::path& path);
std::vector<MatchDecision> read_decisions_csv(const std::filesystem::path& path);

}  // namespace mpf::seq
