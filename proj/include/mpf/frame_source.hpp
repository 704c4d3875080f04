#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <vector>

#include "mpf/image.hpp"

namespace mpf::io {

/// An ordered, optionally subsampled list of image frames.
///
/// Frame ids are positions in the full (unsubsampled) listing, so a stride of 3
/// keeps ids 0, 3, 6, ... and the first frame is always retained.
class FrameSource {
 public:
  /// Lists image files in `dir`, sorted lexicographically by filename.
  static FrameSource from_directory(const std::filesystem::path& dir, int stride = 1);
  static FrameSource from_files(std::vector<std::filesystem::path> files, int stride = 1);

  std::size_t size() const noexcept { return frames_.size(); }
  int stride() const noexcept { return stride_; }
  const std::vector<int>& frame_ids() const noexcept { return ids_; }
  const std::filesystem::path& path_of(int id) const;
  /// Filename without extension; used to locate per-frame tensor files.
  std::string stem_of(int id) const;

 private:
  FrameSource(std::vector<std::filesystem::path> files, int stride);

  std::vector<std::filesystem::path> frames_;
  std::vector<int> ids_;
  int stride_ = 1;
};

GrayImage load_frame(const FrameSource& source, int id);

/// Decodes any image OpenCV can read and converts it to 8-bit luma.
GrayImage load_image(const std::filesystem::path& path);

}  // namespace mpf::io
