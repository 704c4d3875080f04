#include "mpf/pipeline.hpp"

#include <algorithm>
#include <numeric>

#include "mpf/errors.hpp"
#include "mpf/tensor_file.hpp"

namespace mpf {

namespace fs = std::filesystem;

ChannelExtractor::ChannelExtractor(std::vector<ChannelSpec> channels, const RunConfig& config, fs::path tensor_dir)
    : channels_(std::move(channels)),
      sad_(config.sad),
      hog_(config.hog),
      cnn_layer_(config.cnn_layer),
      tensor_dir_(std::move(tensor_dir)),
      stats_(channels_.size()) {}

fs::path ChannelExtractor::tensor_path(const io::FrameSource& frames, int id, const std::string& layer) const {
  return tensor_dir_ / (frames.stem_of(id) + "_" + layer + ".sqft");
}

namespace {

io::FeatureMapSet channel_tensor(const ChannelSpec& spec, const fs::path& path) {
  if (!fs::is_regular_file(path)) {
    throw IngestError("channel " + spec.name() + ": missing tensor file " + path.string());
  }
  return io::read_tensor(path);
}

}  // namespace

std::vector<FrameDescriptor> ChannelExtractor::extract(const io::FrameSource& frames, int id) {
  const bool needs_image = std::any_of(channels_.begin(), channels_.end(), [](const ChannelSpec& c) {
    return c.kind == ChannelKind::sad || c.kind == ChannelKind::hog;
  });
  GrayImage image;
  if (needs_image) image = io::load_frame(frames, id);

  std::vector<FrameDescriptor> out;
  out.reserve(channels_.size());
  for (std::size_t c = 0; c < channels_.size(); ++c) {
    const ChannelSpec& spec = channels_[c];
    switch (spec.kind) {
      case ChannelKind::sad:
        out.emplace_back(features::sad_descriptor(image, sad_));
        break;
      case ChannelKind::hog:
        out.emplace_back(features::hog_descriptor(image, hog_));
        break;
      case ChannelKind::cnn_pyramid:
        out.emplace_back(features::cnn_pyramid_descriptor(channel_tensor(spec, tensor_path(frames, id, cnn_layer_)), stats_[c]));
        break;
      case ChannelKind::generic_tensor:
        out.emplace_back(features::cnn_pyramid_descriptor(channel_tensor(spec, tensor_path(frames, id, spec.layer)), stats_[c]));
        break;
      case ChannelKind::cnn_argmax:
        out.emplace_back(features::cnn_argmax_keypoints(channel_tensor(spec, tensor_path(frames, id, cnn_layer_))));
        break;
      case ChannelKind::external:
        throw ConfigError("channel " + spec.name() + " has no extractor; its descriptors must be supplied directly");
    }
  }
  return out;
}

void check_channel_inputs(std::span<const ChannelSpec> channels, const fs::path& tensor_dir, const std::string& traverse) {
  for (const auto& c : channels) {
    if (c.kind == ChannelKind::external) {
      throw ConfigError("channel " + c.name() + " cannot be computed from frames");
    }
    if (c.needs_tensors() && (tensor_dir.empty() || !fs::is_directory(tensor_dir))) {
      throw ConfigError("channel " + c.name() + " needs " + traverse + " tensor files but " +
                        (tensor_dir.empty() ? std::string("no tensor directory is configured")
                                            : "'" + tensor_dir.string() + "' is not a directory"));
    }
  }
}

TemplateDatabase build_database(const RunConfig& config) {
  config.validate();
  if (config.reference_dir.empty()) throw ConfigError("build-db: reference_dir is not set");
  check_channel_inputs(config.channels, config.reference_tensor_dir, "reference");
  const auto frames = io::FrameSource::from_directory(config.reference_dir, config.stride);

  TemplateDatabase db;
  for (const auto& spec : config.channels) db.channels.emplace_back(spec);
  ChannelExtractor extractor(config.channels, config, config.reference_tensor_dir);
  for (int id : frames.frame_ids()) {
    auto descriptors = extractor.extract(frames, id);
    for (std::size_t c = 0; c < descriptors.size(); ++c) db.channels[c].add(std::move(descriptors[c]));
    db.frame_ids.push_back(id);
  }
  db.validate();
  return db;
}

std::vector<seq::MatchDecision> localize_descriptors(const TemplateDatabase& db, std::span<const int> query_ids,
                                                     const std::vector<std::vector<FrameDescriptor>>& query,
                                                     const seq::LocalizerParams& params,
                                                     std::vector<std::size_t> channel_subset) {
  db.validate();
  if (query_ids.size() != query.size()) throw std::invalid_argument("query ids and descriptors differ in count");
  if (channel_subset.empty()) {
    channel_subset.resize(db.channels.size());
    std::iota(channel_subset.begin(), channel_subset.end(), 0);
  }
  seq::LocalizerParams local = params;
  if (params.observation_thresholds.size() == db.channels.size() && db.channels.size() > 1) {
    local.observation_thresholds.clear();
    for (std::size_t c : channel_subset) local.observation_thresholds.push_back(params.observation_thresholds.at(c));
  }

  seq::Localizer localizer(db.size(), channel_subset.size(), local, db.frame_ids);
  std::vector<seq::MatchDecision> decisions;
  decisions.reserve(query.size());
  std::vector<std::vector<double>> columns(channel_subset.size());
  for (std::size_t i = 0; i < query.size(); ++i) {
    if (query[i].size() != db.channels.size()) throw std::invalid_argument("query frame has the wrong channel count");
    for (std::size_t j = 0; j < channel_subset.size(); ++j) {
      const std::size_t c = channel_subset[j];
      columns[j] = db.channels.at(c).distance_column(query[i][c]);
    }
    decisions.push_back(localizer.push(query_ids[i], columns));
  }
  return decisions;
}

std::vector<seq::MatchDecision> localize_traverse(const RunConfig& config, const TemplateDatabase& db) {
  config.validate();
  db.validate();
  if (config.query_dir.empty()) throw ConfigError("localize: query_dir is not set");
  std::vector<ChannelSpec> specs;
  for (const auto& ch : db.channels) {
    const bool configured = std::any_of(config.channels.begin(), config.channels.end(),
                                        [&](const ChannelSpec& c) { return c.name() == ch.spec().name(); });
    if (!configured) throw ConfigError("database channel " + ch.spec().name() + " is not in the config's channel list");
    specs.push_back(ch.spec());
  }
  if (config.channels.size() != specs.size()) {
    throw ConfigError("config lists channels the database does not contain");
  }
  check_channel_inputs(specs, config.query_tensor_dir, "query");

  const auto frames = io::FrameSource::from_directory(config.query_dir, config.stride);
  ChannelExtractor extractor(specs, config, config.query_tensor_dir);
  seq::LocalizerParams params = config.localizer;
  if (params.observation_thresholds.size() == config.channels.size() && specs.size() > 1) {
    // Reorder per-channel thresholds from config order to database order.
    params.observation_thresholds.clear();
    for (const auto& s : specs) {
      for (std::size_t c = 0; c < config.channels.size(); ++c) {
        if (config.channels[c].name() == s.name()) params.observation_thresholds.push_back(config.localizer.observation_thresholds[c]);
      }
    }
  }

  seq::Localizer localizer(db.size(), specs.size(), params, db.frame_ids);
  std::vector<seq::MatchDecision> decisions;
  std::vector<std::vector<double>> columns(specs.size());
  for (int id : frames.frame_ids()) {
    const auto descriptors = extractor.extract(frames, id);
    for (std::size_t c = 0; c < specs.size(); ++c) columns[c] = db.channels[c].distance_column(descriptors[c]);
    decisions.push_back(localizer.push(id, columns));
  }
  return decisions;
}

}  // namespace mpf
