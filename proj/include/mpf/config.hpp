#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "mpf/ground_truth.hpp"
#include "mpf/hog.hpp"
#include "mpf/localizer.hpp"
#include "mpf/sad.hpp"
#include "mpf/synthetic.hpp"
#include "mpf/template_database.hpp"

namespace mpf {

/// Everything a command needs, read from a flat-key YAML file.
///
/// Relative paths are resolved against the config file's directory. Every key
/// is optional except where a command needs it; unknown keys are rejected.
struct RunConfig {
  std::vector<ChannelSpec> channels;
  seq::LocalizerParams localizer;
  features::SadParams sad;
  features::HogParams hog;
  std::string cnn_layer = "conv5";

  std::filesystem::path reference_dir;
  std::filesystem::path query_dir;
  std::filesystem::path reference_tensor_dir;
  std::filesystem::path query_tensor_dir;
  std::filesystem::path database_dir;
  int stride = 1;

  std::filesystem::path ground_truth;
  io::GroundTruthMode ground_truth_mode = io::GroundTruthMode::frame_offset;
  double ground_truth_tolerance = 10.0;

  std::uint64_t seed = 1;
  std::optional<eval::SyntheticWorld> world;
  /// synth-bench runs: "mpf", "all" (fusion without voting) and "single" (one run per channel).
  std::vector<std::string> bench_runs{"mpf", "all", "single"};

  /// Throws ConfigError.
  void validate() const;
};

RunConfig parse_run_config(const std::string& yaml_text, const std::filesystem::path& base_dir = {});
RunConfig load_run_config(const std::filesystem::path& path);

}  // namespace mpf
