#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace mpf {

/// Raised when frames, CSVs or other inputs cannot be ingested.
class IngestError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed tensor file. Carries the byte offset where parsing failed.
class FormatError : public std::runtime_error {
 public:
  FormatError(const std::string& detail, std::uint64_t offset)
      : std::runtime_error(detail + " (at byte " + std::to_string(offset) + ")"), detail_(detail), offset_(offset) {}

  const std::string& detail() const noexcept { return detail_; }
  std::uint64_t offset() const noexcept { return offset_; }

 private:
  std::string detail_;
  std::uint64_t offset_;
};

/// Invalid run or world configuration, raised before any computation starts.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace mpf
