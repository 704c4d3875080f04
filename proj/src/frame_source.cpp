#include "mpf/frame_source.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <span>

#include <opencv2/core.hpp>
#include <opencv2/imgcodecs.hpp>

#include "mpf/errors.hpp"

namespace mpf::io {

namespace fs = std::filesystem;

namespace {

bool is_image_file(const fs::path& p) {
  static constexpr std::array<std::string_view, 9> kExtensions = {
      ".png", ".jpg", ".jpeg", ".pgm", ".ppm", ".pnm", ".bmp", ".tif", ".tiff"};
  std::string ext = p.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return std::find(kExtensions.begin(), kExtensions.end(), ext) != kExtensions.end();
}

}  // namespace

FrameSource::FrameSource(std::vector<fs::path> files, int stride) : stride_(stride) {
  if (stride < 1) throw IngestError("frame stride must be >= 1, got " + std::to_string(stride));
  if (files.empty()) throw IngestError("no frames");
  for (std::size_t i = 0; i < files.size(); i += static_cast<std::size_t>(stride)) {
    frames_.push_back(std::move(files[i]));
    ids_.push_back(static_cast<int>(i));
  }
}

FrameSource FrameSource::from_directory(const fs::path& dir, int stride) {
  if (!fs::is_directory(dir)) throw IngestError("frame directory not found: " + dir.string());
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && is_image_file(entry.path())) files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end(),
            [](const fs::path& a, const fs::path& b) { return a.filename() < b.filename(); });
  if (files.empty()) throw IngestError("no frames in " + dir.string());
  return FrameSource(std::move(files), stride);
}

FrameSource FrameSource::from_files(std::vector<fs::path> files, int stride) {
  return FrameSource(std::move(files), stride);
}

const fs::path& FrameSource::path_of(int id) const {
  const auto it = std::lower_bound(ids_.begin(), ids_.end(), id);
  if (it == ids_.end() || *it != id) {
    throw IngestError("frame " + std::to_string(id) + " is not part of this source");
  }
  return frames_[static_cast<std::size_t>(it - ids_.begin())];
}

std::string FrameSource::stem_of(int id) const { return path_of(id).stem().string(); }

GrayImage load_image(const fs::path& path) {
  if (!fs::exists(path)) throw IngestError("missing frame file: " + path.string());
  cv::Mat bgr = cv::imread(path.string(), cv::IMREAD_COLOR);
  if (bgr.empty()) throw IngestError("cannot decode frame: " + path.string());
  if (bgr.depth() != CV_8U) bgr.convertTo(bgr, CV_8U);
  cv::Mat rgb(bgr.rows, bgr.cols, CV_8UC3);
  for (int y = 0; y < bgr.rows; ++y) {
    const auto* src = bgr.ptr<cv::Vec3b>(y);
    auto* dst = rgb.ptr<cv::Vec3b>(y);
    for (int x = 0; x < bgr.cols; ++x) dst[x] = cv::Vec3b(src[x][2], src[x][1], src[x][0]);
  }
  const auto bytes = static_cast<std::size_t>(rgb.total()) * 3;
  return luma_from_rgb(std::span<const std::uint8_t>(rgb.data, bytes), rgb.cols, rgb.rows);
}

GrayImage load_frame(const FrameSource& source, int id) {
  const fs::path& p = source.path_of(id);
  try {
    GrayImage img = load_image(p);
    if (img.empty()) throw IngestError("empty raster");
    return img;
  } catch (const IngestError& e) {
    throw IngestError("frame " + std::to_string(id) + " (" + p.filename().string() + "): " + e.what());
  } catch (const cv::Exception& e) {
    throw IngestError("frame " + std::to_string(id) + " (" + p.filename().string() + "): " + e.what());
  }
}

}  // namespace mpf::io
