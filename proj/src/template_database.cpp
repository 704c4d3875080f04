#include "mpf/template_database.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include "json.hpp"

#include "mpf/errors.hpp"
#include "mpf/tensor_file.hpp"

namespace mpf {

namespace fs = std::filesystem;
using nlohmann::json;

std::string_view to_string(Metric metric) {
  switch (metric) {
    case Metric::cosine: return "cosine";
    case Metric::sad: return "sad";
    case Metric::keypoint: return "keypoint";
  }
  return "cosine";
}

Metric parse_metric(std::string_view name) {
  if (name == "cosine") return Metric::cosine;
  if (name == "sad") return Metric::sad;
  if (name == "keypoint") return Metric::keypoint;
  throw ConfigError("unknown metric '" + std::string(name) + "'");
}

ChannelSpec ChannelSpec::parse(std::string_view text) {
  ChannelSpec spec;
  const auto colon = text.find(':');
  const std::string_view head = text.substr(0, colon);
  const std::string_view tail = colon == std::string_view::npos ? std::string_view{} : text.substr(colon + 1);
  const bool wants_suffix = head == "generic-tensor" || head == "external";
  if (wants_suffix == tail.empty() || (colon != std::string_view::npos && !wants_suffix)) {
    throw ConfigError("invalid channel '" + std::string(text) + "'");
  }
  if (head == "sad") {
    spec.kind = ChannelKind::sad;
  } else if (head == "hog") {
    spec.kind = ChannelKind::hog;
  } else if (head == "cnn-pyramid") {
    spec.kind = ChannelKind::cnn_pyramid;
  } else if (head == "cnn-argmax") {
    spec.kind = ChannelKind::cnn_argmax;
    spec.metric = Metric::keypoint;
  } else if (head == "generic-tensor") {
    spec.kind = ChannelKind::generic_tensor;
    spec.layer = std::string(tail);
  } else if (head == "external") {
    spec.kind = ChannelKind::external;
    spec.layer = std::string(tail);
  } else {
    throw ConfigError("unknown channel '" + std::string(text) + "'");
  }
  return spec;
}

std::string ChannelSpec::name() const {
  switch (kind) {
    case ChannelKind::sad: return "sad";
    case ChannelKind::hog: return "hog";
    case ChannelKind::cnn_pyramid: return "cnn-pyramid";
    case ChannelKind::cnn_argmax: return "cnn-argmax";
    case ChannelKind::generic_tensor: return "generic-tensor:" + layer;
    case ChannelKind::external: return "external:" + layer;
  }
  return {};
}

bool ChannelSpec::needs_tensors() const noexcept {
  return kind == ChannelKind::cnn_pyramid || kind == ChannelKind::cnn_argmax || kind == ChannelKind::generic_tensor;
}

void DescriptorMatrix::append(std::span<const float> values) {
  if (values.empty()) throw std::invalid_argument("empty descriptor");
  if (rows_ == 0) cols_ = values.size();
  if (values.size() != cols_) {
    throw std::invalid_argument("descriptor length " + std::to_string(values.size()) + " differs from " +
                                std::to_string(cols_));
  }
  data_.insert(data_.end(), values.begin(), values.end());
  ++rows_;
}

namespace {

void check_lengths(std::span<const float> a, std::span<const float> b) {
  if (a.size() != b.size()) throw std::invalid_argument("descriptor lengths differ");
  if (a.empty()) throw std::invalid_argument("empty descriptor");
}

double cosine_from(double dot, double aa, double bb) {
  if (!(aa > 0.0) || !(bb > 0.0)) return 1.0;
  return std::max(0.0, 1.0 - dot / std::sqrt(aa * bb));
}

}  // namespace

double cosine_distance(std::span<const float> a, std::span<const float> b) {
  check_lengths(a, b);
  double dot = 0.0, aa = 0.0, bb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += static_cast<double>(a[i]) * b[i];
    aa += static_cast<double>(a[i]) * a[i];
    bb += static_cast<double>(b[i]) * b[i];
  }
  return cosine_from(dot, aa, bb);
}

double sad_distance(std::span<const float> a, std::span<const float> b) {
  check_lengths(a, b);
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) sum += std::abs(static_cast<double>(a[i]) - b[i]);
  return sum / static_cast<double>(a.size());
}

std::vector<double> cosine_distance_column(std::span<const float> query, const DescriptorMatrix& templates) {
  if (templates.rows() == 0) throw std::invalid_argument("no templates to compare against");
  if (query.size() != templates.cols()) throw std::invalid_argument("query length does not match templates");
  double qq = 0.0;
  for (float v : query) qq += static_cast<double>(v) * v;
  std::vector<double> out(templates.rows());
  for (std::size_t k = 0; k < templates.rows(); ++k) {
    const auto t = templates.row(k);
    double dot = 0.0, tt = 0.0;
    for (std::size_t i = 0; i < t.size(); ++i) {
      dot += static_cast<double>(query[i]) * t[i];
      tt += static_cast<double>(t[i]) * t[i];
    }
    out[k] = cosine_from(dot, qq, tt);
  }
  return out;
}

std::vector<double> sad_distance_column(std::span<const float> query, const DescriptorMatrix& templates) {
  if (templates.rows() == 0) throw std::invalid_argument("no templates to compare against");
  if (query.size() != templates.cols()) throw std::invalid_argument("query length does not match templates");
  std::vector<double> out(templates.rows());
  for (std::size_t k = 0; k < templates.rows(); ++k) out[k] = sad_distance(query, templates.row(k));
  return out;
}

std::vector<double> keypoint_distance_column(const features::KeypointSet& query,
                                             std::span<const features::KeypointSet> templates) {
  if (templates.empty()) throw std::invalid_argument("no templates to compare against");
  std::vector<double> out(templates.size());
  for (std::size_t k = 0; k < templates.size(); ++k) out[k] = features::keypoint_distance(query, templates[k]);
  return out;
}

ChannelTemplates::ChannelTemplates(ChannelSpec spec) : spec_(std::move(spec)) {}

std::size_t ChannelTemplates::size() const noexcept {
  return spec_.uses_keypoints() ? keypoints_.size() : vectors_.rows();
}

void ChannelTemplates::add(FrameDescriptor descriptor) {
  if (spec_.uses_keypoints()) {
    auto* kp = std::get_if<features::KeypointSet>(&descriptor);
    if (kp == nullptr) throw std::invalid_argument(spec_.name() + ": expected keypoints");
    if (!keypoints_.empty() && (kp->maps() != keypoints_.front().maps() || kp->height != keypoints_.front().height ||
                                kp->width != keypoints_.front().width)) {
      throw std::invalid_argument(spec_.name() + ": keypoint layout changed between frames");
    }
    keypoints_.push_back(std::move(*kp));
    return;
  }
  const auto* v = std::get_if<DescriptorVector>(&descriptor);
  if (v == nullptr) throw std::invalid_argument(spec_.name() + ": expected a descriptor vector");
  for (float x : *v) {
    if (!std::isfinite(x)) throw std::invalid_argument(spec_.name() + ": non-finite descriptor value");
  }
  vectors_.append(*v);
}

std::vector<double> ChannelTemplates::distance_column(const FrameDescriptor& query) const {
  switch (spec_.metric) {
    case Metric::keypoint: {
      const auto* kp = std::get_if<features::KeypointSet>(&query);
      if (kp == nullptr) throw std::invalid_argument(spec_.name() + ": query is not a keypoint set");
      return keypoint_distance_column(*kp, keypoints_);
    }
    case Metric::cosine:
    case Metric::sad: {
      const auto* v = std::get_if<DescriptorVector>(&query);
      if (v == nullptr) throw std::invalid_argument(spec_.name() + ": query is not a descriptor vector");
      return spec_.metric == Metric::cosine ? cosine_distance_column(*v, vectors_) : sad_distance_column(*v, vectors_);
    }
  }
  throw std::logic_error("unreachable");
}

void TemplateDatabase::validate() const {
  if (frame_ids.empty()) throw std::invalid_argument("template database is empty");
  if (channels.empty()) throw std::invalid_argument("template database has no channels");
  if (!std::is_sorted(frame_ids.begin(), frame_ids.end()) ||
      std::adjacent_find(frame_ids.begin(), frame_ids.end()) != frame_ids.end()) {
    throw std::invalid_argument("template frame ids must be strictly increasing");
  }
  for (const auto& c : channels) {
    if (c.size() != frame_ids.size()) {
      throw std::invalid_argument("channel " + c.spec().name() + " covers " + std::to_string(c.size()) + " of " +
                                  std::to_string(frame_ids.size()) + " templates");
    }
  }
}

namespace {

std::string channel_file_name(std::size_t index, const ChannelSpec& spec) {
  std::string name = spec.name();
  std::replace_if(name.begin(), name.end(), [](char c) { return c == ':' || c == '/' || c == '\\'; }, '_');
  return std::to_string(index) + "_" + name + ".sqft";
}

}  // namespace

void save_database(const TemplateDatabase& db, const fs::path& dir) {
  db.validate();
  fs::create_directories(dir);
  json manifest;
  manifest["format"] = "mpf-template-db/1";
  manifest["templates"] = db.size();
  manifest["frame_ids"] = db.frame_ids;
  manifest["channels"] = json::array();
  for (std::size_t c = 0; c < db.channels.size(); ++c) {
    const auto& ch = db.channels[c];
    const std::string file = channel_file_name(c, ch.spec());
    json entry{{"channel", ch.spec().name()}, {"metric", to_string(ch.spec().metric)}, {"file", file}};
    io::FeatureMapSet tensor;
    if (ch.spec().uses_keypoints()) {
      const auto& first = ch.keypoints().front();
      entry["maps"] = first.maps();
      entry["map_height"] = first.height;
      entry["map_width"] = first.width;
      tensor = io::FeatureMapSet(static_cast<std::uint32_t>(db.size()), static_cast<std::uint32_t>(first.maps()), 2);
      for (std::size_t k = 0; k < db.size(); ++k) {
        for (std::size_t f = 0; f < first.maps(); ++f) {
          tensor.at(k, f, 0) = static_cast<float>(ch.keypoints()[k].points[f].x);
          tensor.at(k, f, 1) = static_cast<float>(ch.keypoints()[k].points[f].y);
        }
      }
    } else {
      entry["length"] = ch.vectors().cols();
      tensor = io::FeatureMapSet(static_cast<std::uint32_t>(db.size()), 1, static_cast<std::uint32_t>(ch.vectors().cols()));
      tensor.values = ch.vectors().data();
    }
    io::write_tensor(tensor, dir / file);
    manifest["channels"].push_back(std::move(entry));
  }
  std::ofstream out(dir / "manifest.json");
  if (!out) throw IngestError("cannot write " + (dir / "manifest.json").string());
  out << manifest.dump(2) << '\n';
}

TemplateDatabase load_database(const fs::path& dir) {
  std::ifstream in(dir / "manifest.json");
  if (!in) throw IngestError("no template database manifest in " + dir.string());
  json manifest;
  try {
    manifest = json::parse(in);
  } catch (const json::exception& e) {
    throw IngestError("malformed manifest in " + dir.string() + ": " + e.what());
  }
  if (manifest.value("format", std::string{}) != "mpf-template-db/1") {
    throw IngestError("unsupported template database format in " + dir.string());
  }
  TemplateDatabase db;
  try {
    db.frame_ids = manifest.at("frame_ids").get<std::vector<int>>();
    const std::size_t n = db.frame_ids.size();
    for (const auto& entry : manifest.at("channels")) {
      ChannelSpec spec = ChannelSpec::parse(entry.at("channel").get<std::string>());
      spec.metric = parse_metric(entry.at("metric").get<std::string>());
      ChannelTemplates ch(spec);
      const auto tensor = io::read_tensor(dir / entry.at("file").get<std::string>());
      if (tensor.maps != n) throw IngestError(spec.name() + ": tensor holds " + std::to_string(tensor.maps) + " templates");
      for (std::size_t k = 0; k < n; ++k) {
        const auto row = tensor.map(k);
        if (spec.uses_keypoints()) {
          features::KeypointSet kp;
          kp.height = entry.at("map_height").get<int>();
          kp.width = entry.at("map_width").get<int>();
          for (std::size_t f = 0; f < tensor.height; ++f) {
            kp.points.push_back({static_cast<int>(row[2 * f]), static_cast<int>(row[2 * f + 1])});
          }
          ch.add(std::move(kp));
        } else {
          ch.add(DescriptorVector(row.begin(), row.end()));
        }
      }
      db.channels.push_back(std::move(ch));
    }
  } catch (const json::exception& e) {
    throw IngestError("malformed manifest in " + dir.string() + ": " + e.what());
  }
  db.validate();
  return db;
}

}  // namespace mpf
