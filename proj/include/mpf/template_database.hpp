#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "mpf/cnn_features.hpp"
#include "mpf/descriptor.hpp"

namespace mpf {

enum class ChannelKind { sad, hog, cnn_pyramid, cnn_argmax, generic_tensor, external };

/// How a channel compares a query descriptor against its templates.
enum class Metric { cosine, sad, keypoint };

std::string_view to_string(Metric metric);
Metric parse_metric(std::string_view name);

/// A processing method. Textual forms: "sad", "hog", "cnn-pyramid",
/// "cnn-argmax", "generic-tensor:<layer>" and "external:<name>" (descriptors
/// supplied by the caller, e.g. a synthetic world).
struct ChannelSpec {
  ChannelKind kind = ChannelKind::sad;
  std::string layer;
  Metric metric = Metric::cosine;

  static ChannelSpec parse(std::string_view text);
  std::string name() const;
  bool needs_tensors() const noexcept;
  bool uses_keypoints() const noexcept { return metric == Metric::keypoint; }
};

/// Per-frame channel output: a dense vector or, for the argmax channel, keypoints.
using FrameDescriptor = std::variant<DescriptorVector, features::KeypointSet>;

/// Row-major stack of equal-length descriptors.
class DescriptorMatrix {
 public:
  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::span<const float> row(std::size_t i) const {
    return std::span<const float>(data_).subspan(i * cols_, cols_);
  }
  const std::vector<float>& data() const noexcept { return data_; }
  void append(std::span<const float> values);

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<float> data_;
};

double cosine_distance(std::span<const float> a, std::span<const float> b);
/// Mean absolute difference.
double sad_distance(std::span<const float> a, std::span<const float> b);

/// 1 - cos(q, t_k) for every template row; a zero-norm side gives 1.0.
std::vector<double> cosine_distance_column(std::span<const float> query, const DescriptorMatrix& templates);
std::vector<double> sad_distance_column(std::span<const float> query, const DescriptorMatrix& templates);
std::vector<double> keypoint_distance_column(const features::KeypointSet& query,
                                             std::span<const features::KeypointSet> templates);

/// One channel's reference descriptors.
class ChannelTemplates {
 public:
  explicit ChannelTemplates(ChannelSpec spec);

  const ChannelSpec& spec() const noexcept { return spec_; }
  std::size_t size() const noexcept;
  const DescriptorMatrix& vectors() const noexcept { return vectors_; }
  const std::vector<features::KeypointSet>& keypoints() const noexcept { return keypoints_; }

  void add(FrameDescriptor descriptor);
  /// Distance from `query` to every template, using the channel's metric.
  std::vector<double> distance_column(const FrameDescriptor& query) const;

 private:
  ChannelSpec spec_;
  DescriptorMatrix vectors_;
  std::vector<features::KeypointSet> keypoints_;
};

/// Reference-traverse descriptors for every channel, indexed by template 0..N-1.
struct TemplateDatabase {
  std::vector<int> frame_ids;
  std::vector<ChannelTemplates> channels;

  std::size_t size() const noexcept { return frame_ids.size(); }
  /// Throws std::invalid_argument unless every channel covers every template.
  void validate() const;
};

/// Writes manifest.json plus one tensor file per channel into `dir`.
void save_database(const TemplateDatabase& db, const std::filesystem::path& dir);
TemplateDatabase load_database(const std::filesystem::path& dir);

}  // namespace mpf
