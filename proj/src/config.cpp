#include "mpf/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <yaml-cpp/yaml.h>

#include "mpf/errors.hpp"

namespace mpf {

namespace fs = std::filesystem;

void RunConfig::validate() const {
  if (channels.empty()) throw ConfigError("config: at least one channel is required");
  localizer.validate(channels.size());
  if (stride < 1) throw ConfigError("config: stride must be >= 1");
  if (!(ground_truth_tolerance > 0.0)) throw ConfigError("config: gt_tolerance must be positive");
  if (sad.patch <= 0 || sad.width % sad.patch != 0 || sad.height % sad.patch != 0) {
    throw ConfigError("config: patch_size must divide the 64x32 thumbnail");
  }
  std::set<std::string> names;
  for (const auto& c : channels) {
    if (!names.insert(c.name()).second) throw ConfigError("config: duplicate channel " + c.name());
  }
  for (const auto& run : bench_runs) {
    if (run != "mpf" && run != "all" && run != "single") throw ConfigError("config: unknown bench run '" + run + "'");
  }
  if (world) {
    world->validate();
    if (world->channels != channels.size()) {
      throw ConfigError("config: synthetic world has " + std::to_string(world->channels) + " channels but " +
                        std::to_string(channels.size()) + " are listed");
    }
  }
}

namespace {

template <typename T>
T scalar(const YAML::Node& node, const std::string& key) {
  try {
    return node.as<T>();
  } catch (const YAML::Exception&) {
    throw ConfigError("config: bad value for '" + key + "'");
  }
}

std::vector<std::vector<double>> rows(const YAML::Node& node, const std::string& key, std::size_t width) {
  if (!node.IsSequence()) throw ConfigError("config: '" + key + "' must be a list");
  std::vector<std::vector<double>> out;
  for (const auto& row : node) {
    if (!row.IsSequence() || row.size() != width) {
      throw ConfigError("config: every entry of '" + key + "' needs " + std::to_string(width) + " numbers");
    }
    std::vector<double> r;
    for (const auto& v : row) r.push_back(scalar<double>(v, key));
    out.push_back(std::move(r));
  }
  return out;
}

std::size_t index(double v, const std::string& key) {
  if (!(v >= 0.0) || v != static_cast<double>(static_cast<std::size_t>(v))) {
    throw ConfigError("config: '" + key + "' needs non-negative integers");
  }
  return static_cast<std::size_t>(v);
}

}  // namespace

RunConfig parse_run_config(const std::string& yaml_text, const fs::path& base_dir) {
  YAML::Node root;
  try {
    root = YAML::Load(yaml_text);
  } catch (const YAML::Exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  RunConfig cfg;
  if (root.IsNull()) {
    cfg.validate();
    return cfg;
  }
  if (!root.IsMap()) throw ConfigError("config: top level must be a mapping of flat keys");

  const auto path = [&](const YAML::Node& n, const std::string& key) {
    const fs::path p = scalar<std::string>(n, key);
    return p.is_absolute() || base_dir.empty() ? p : base_dir / p;
  };
  auto& lp = cfg.localizer;
  std::optional<std::string> sad_metric;
  eval::SyntheticWorld world;
  bool has_world = false;

  for (const auto& kv : root) {
    const std::string key = kv.first.as<std::string>();
    const YAML::Node& v = kv.second;
    if (key.rfind("synthetic.", 0) == 0) {
      has_world = true;
      const std::string sub = key.substr(10);
      if (sub == "channels") world.channels = scalar<std::size_t>(v, key);
      else if (sub == "dimension") world.dimension = scalar<std::size_t>(v, key);
      else if (sub == "templates") world.templates = scalar<std::size_t>(v, key);
      else if (sub == "query_frames") world.query_frames = scalar<std::size_t>(v, key);
      else if (sub == "start_position") world.start_position = scalar<double>(v, key);
      else if (sub == "velocity") world.default_velocity = scalar<double>(v, key);
      else if (sub == "smoothness") world.smoothness = scalar<double>(v, key);
      else if (sub == "reference_noise") world.reference_noise = scalar<double>(v, key);
      else if (sub == "query_noise") world.query_noise = scalar<double>(v, key);
      else if (sub == "tolerance") world.tolerance = scalar<double>(v, key);
      else if (sub == "velocity_segments") {
        for (const auto& r : rows(v, key, 3)) world.velocity.push_back({{index(r[0], key), index(r[1], key)}, r[2]});
      } else if (sub == "corruption") {
        // [channel, begin, end]
        for (const auto& r : rows(v, key, 3)) {
          const std::size_t c = index(r[0], key);
          if (world.corruption.size() <= c) world.corruption.resize(c + 1);
          world.corruption[c].push_back({index(r[1], key), index(r[2], key)});
        }
      } else if (sub == "novel") {
        for (const auto& r : rows(v, key, 2)) world.novel.push_back({index(r[0], key), index(r[1], key)});
      } else if (sub == "aliased") {
        for (const auto& r : rows(v, key, 3)) {
          world.aliased.push_back({index(r[0], key), index(r[1], key), index(r[2], key)});
        }
      } else {
        throw ConfigError("config: unknown key '" + key + "'");
      }
      continue;
    }

    if (key == "channels") {
      if (!v.IsSequence()) throw ConfigError("config: 'channels' must be a list");
      for (const auto& c : v) cfg.channels.push_back(ChannelSpec::parse(scalar<std::string>(c, key)));
    } else if (key == "reference_dir") cfg.reference_dir = path(v, key);
    else if (key == "query_dir") cfg.query_dir = path(v, key);
    else if (key == "reference_tensor_dir") cfg.reference_tensor_dir = path(v, key);
    else if (key == "query_tensor_dir") cfg.query_tensor_dir = path(v, key);
    else if (key == "database") cfg.database_dir = path(v, key);
    else if (key == "stride") cfg.stride = scalar<int>(v, key);
    else if (key == "cnn_layer") cfg.cnn_layer = scalar<std::string>(v, key);
    else if (key == "sad_metric") sad_metric = scalar<std::string>(v, key);
    else if (key == "patch_size") cfg.sad.patch = scalar<int>(v, key);
    else if (key == "obs_threshold") {
      lp.observation_thresholds.clear();
      if (v.IsSequence()) {
        for (const auto& t : v) lp.observation_thresholds.push_back(scalar<double>(t, key));
      } else {
        lp.observation_thresholds.push_back(scalar<double>(v, key));
      }
    } else if (key == "epsilon") lp.transition.epsilon = scalar<double>(v, key);
    else if (key == "quality_threshold") lp.quality_threshold = scalar<double>(v, key);
    else if (key == "quality_window") lp.quality_half_width = scalar<std::size_t>(v, key);
    else if (key == "min_sequence") lp.min_sequence = scalar<std::size_t>(v, key);
    else if (key == "max_sequence") lp.max_sequence = scalar<std::size_t>(v, key);
    else if (key == "min_velocity") lp.transition.min_offset = scalar<int>(v, key);
    else if (key == "max_velocity") lp.transition.max_offset = scalar<int>(v, key);
    else if (key == "accept_threshold") lp.accept_threshold = scalar<double>(v, key);
    else if (key == "vote_mode") lp.consensus = seq::parse_consensus_mode(scalar<std::string>(v, key));
    else if (key == "mpf") lp.fusion_voting = scalar<bool>(v, key);
    else if (key == "dynamic_sequence") lp.dynamic_length = scalar<bool>(v, key);
    else if (key == "ground_truth") cfg.ground_truth = path(v, key);
    else if (key == "gt_mode") cfg.ground_truth_mode = io::parse_ground_truth_mode(scalar<std::string>(v, key));
    else if (key == "gt_tolerance") cfg.ground_truth_tolerance = scalar<double>(v, key);
    else if (key == "seed") cfg.seed = scalar<std::uint64_t>(v, key);
    else if (key == "bench_runs") {
      cfg.bench_runs.clear();
      for (const auto& r : v) cfg.bench_runs.push_back(scalar<std::string>(r, key));
    } else {
      throw ConfigError("config: unknown key '" + key + "'");
    }
  }

  if (sad_metric) {
    const Metric m = parse_metric(*sad_metric);
    if (m == Metric::keypoint) throw ConfigError("config: sad_metric must be cosine or sad");
    for (auto& c : cfg.channels) {
      if (c.kind == ChannelKind::sad) c.metric = m;
    }
  }
  if (has_world) {
    world.seed = cfg.seed;
    world.max_velocity = lp.transition.max_offset;
    if (cfg.channels.empty()) {
      for (std::size_t c = 0; c < world.channels; ++c) cfg.channels.push_back(ChannelSpec::parse("external:c" + std::to_string(c)));
    }
    cfg.world = std::move(world);
  }
  cfg.validate();
  return cfg;
}

RunConfig load_run_config(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_run_config(ss.str(), path.parent_path());
}

}  // namespace mpf
