#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "nocs/image.hpp"

namespace nocs::io {

/// Unreadable, missing or malformed input files.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// 8-bit image with interleaved samples.
struct Raster {
  int width = 0;
  int height = 0;
  int channels = 0;
  std::vector<std::uint8_t> samples;

  std::uint8_t& at(int x, int y, int c) {
    return samples[(static_cast<std::size_t>(y) * width + x) * channels + c];
  }
  std::uint8_t at(int x, int y, int c) const {
    return samples[(static_cast<std::size_t>(y) * width + x) * channels + c];
  }

  friend bool operator==(const Raster&, const Raster&) = default;
};

/// Reads PNG (any bit depth, converted to 8 bit), binary or ASCII PGM/PPM,
/// or a `.bands` manifest listing one grayscale file per line (paths
/// relative to the manifest, `#` starts a comment).
Raster read_image(const std::filesystem::path& path);

/// Writes PNG, PGM/PPM (by extension) or a `.bands` manifest plus one PNG
/// per band next to it. `comment` lands in a PNG tEXt chunk or PNM comment.
void write_image(const std::filesystem::path& path, const Raster& raster,
                 const std::string& comment = {});

bool is_image_path(const std::filesystem::path& path);

/// Plane `channel` promoted to floating point.
Channel extract_channel(const Raster& raster, int channel);

/// Clamp to [0, 255], then round half to even.
std::uint8_t quantize(double value) noexcept;

void store_channel(Raster& raster, int channel, const Channel& values);

/// 0 -> masked, 255 -> valid; anything else is rejected.
Mask mask_from_raster(const Raster& raster);
Raster mask_to_raster(const Mask& mask);

}  // namespace nocs::io
