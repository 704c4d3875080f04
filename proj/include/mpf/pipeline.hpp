#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "mpf/cnn_features.hpp"
#include "mpf/config.hpp"
#include "mpf/frame_source.hpp"
#include "mpf/localizer.hpp"
#include "mpf/template_database.hpp"

namespace mpf {

/// Computes every configured channel for the frames of one traverse.
///
/// Holds the running statistics of the CNN pyramid channels, so frames must be
/// fed in traverse order and each traverse needs its own extractor.
class ChannelExtractor {
 public:
  ChannelExtractor(std::vector<ChannelSpec> channels, const RunConfig& config, std::filesystem::path tensor_dir);

  std::vector<FrameDescriptor> extract(const io::FrameSource& frames, int id);
  /// Tensor file holding `layer` for the frame: <tensor_dir>/<frame stem>_<layer>.sqft
  std::filesystem::path tensor_path(const io::FrameSource& frames, int id, const std::string& layer) const;

 private:
  std::vector<ChannelSpec> channels_;
  features::SadParams sad_;
  features::HogParams hog_;
  std::string cnn_layer_;
  std::filesystem::path tensor_dir_;
  std::vector<features::RunningStats> stats_;
};

/// Fails fast with a message naming the channel when its inputs are missing.
void check_channel_inputs(std::span<const ChannelSpec> channels, const std::filesystem::path& tensor_dir,
                          const std::string& traverse);

TemplateDatabase build_database(const RunConfig& config);

/// Runs the localizer over precomputed query descriptors ([frame][channel]),
/// using only the database channels listed in `channel_subset` (all when empty).
std::vector<seq::MatchDecision> localize_descriptors(const TemplateDatabase& db, std::span<const int> query_ids,
                                                     const std::vector<std::vector<FrameDescriptor>>& query,
                                                     const seq::LocalizerParams& params,
                                                     std::vector<std::size_t> channel_subset = {});

/// Extracts query descriptors from config.query_dir and localizes every frame.
std::vector<seq::MatchDecision> localize_traverse(const RunConfig& config, const TemplateDatabase& db);

}  // namespace mpf
