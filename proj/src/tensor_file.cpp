#include "mpf/tensor_file.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <limits>
#include <stdexcept>
#include <string>

#include "mpf/errors.hpp"

namespace mpf::io {

namespace {

void put_u32(std::vector<std::byte>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::byte>((v >> (8 * i)) & 0xFFu));
}

std::uint32_t get_u32(std::span<const std::byte> bytes, std::size_t offset) {
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) {
    v |= static_cast<std::uint32_t>(std::to_integer<std::uint8_t>(bytes[offset + i])) << (8 * i);
  }
  return v;
}

}  // namespace

FeatureMapSet::FeatureMapSet(std::uint32_t f, std::uint32_t h, std::uint32_t w, float fill)
    : maps(f), height(h), width(w), values(static_cast<std::size_t>(f) * h * w, fill) {}

std::vector<std::byte> encode_tensor(const FeatureMapSet& set) {
  if (set.maps == 0 || set.height == 0 || set.width == 0) {
    throw std::invalid_argument("tensor dims must all be >= 1");
  }
  if (set.values.size() != static_cast<std::size_t>(set.maps) * set.map_size()) {
    throw std::invalid_argument("tensor payload does not match its dims");
  }
  std::vector<std::byte> out;
  out.reserve(kTensorHeaderBytes + set.values.size() * 4);
  for (char c : kTensorMagic) out.push_back(static_cast<std::byte>(c));
  put_u32(out, set.maps);
  put_u32(out, set.height);
  put_u32(out, set.width);
  for (float v : set.values) put_u32(out, std::bit_cast<std::uint32_t>(v));
  return out;
}

FeatureMapSet decode_tensor(std::span<const std::byte> bytes) {
  if (bytes.size() < kTensorMagic.size()) throw FormatError("truncated tensor magic", bytes.size());
  for (std::size_t i = 0; i < kTensorMagic.size(); ++i) {
    if (std::to_integer<char>(bytes[i]) != kTensorMagic[i]) throw FormatError("bad tensor magic", i);
  }
  if (bytes.size() < kTensorHeaderBytes) throw FormatError("truncated tensor header", bytes.size());

  const std::uint32_t maps = get_u32(bytes, 8);
  const std::uint32_t height = get_u32(bytes, 12);
  const std::uint32_t width = get_u32(bytes, 16);
  if (maps == 0) throw FormatError("tensor map count is zero", 8);
  if (height == 0) throw FormatError("tensor height is zero", 12);
  if (width == 0) throw FormatError("tensor width is zero", 16);

  // F*H*W*4 must fit in the address space before we trust it.
  constexpr auto kMax = std::numeric_limits<std::uint64_t>::max();
  const std::uint64_t hw = static_cast<std::uint64_t>(height) * width;
  if (hw > kMax / maps || hw * maps > kMax / 4) throw FormatError("tensor dims overflow", 8);
  const std::uint64_t payload = hw * maps * 4;
  const std::uint64_t available = bytes.size() - kTensorHeaderBytes;
  if (available < payload) {
    throw FormatError("truncated tensor payload: expected " + std::to_string(payload) + " bytes, found " +
                          std::to_string(available),
                      bytes.size());
  }
  if (available > payload) throw FormatError("trailing bytes after tensor payload", kTensorHeaderBytes + payload);

  FeatureMapSet set(maps, height, width);
  for (std::size_t i = 0; i < set.values.size(); ++i) {
    set.values[i] = std::bit_cast<float>(get_u32(bytes, kTensorHeaderBytes + 4 * i));
  }
  return set;
}

void write_tensor(const FeatureMapSet& set, const std::filesystem::path& path) {
  const auto bytes = encode_tensor(set);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IngestError("cannot open tensor file for writing: " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IngestError("failed writing tensor file: " + path.string());
}

FeatureMapSet read_tensor(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IngestError("cannot open tensor file: " + path.string());
  in.seekg(0, std::ios::end);
  const auto size = static_cast<std::size_t>(in.tellg());
  in.seekg(0);
  std::vector<std::byte> bytes(size);
  in.read(reinterpret_cast<char*>(bytes.data()), static_cast<std::streamsize>(size));
  if (!in) throw IngestError("failed reading tensor file: " + path.string());
  try {
    return decode_tensor(bytes);
  } catch (const FormatError& e) {
    throw FormatError(path.string() + ": " + e.detail(), e.offset());
  }
}

}  // namespace mpf::io
