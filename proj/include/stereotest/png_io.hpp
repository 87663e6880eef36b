#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "stereotest/renderer.hpp"

namespace stereo {

/// 8-bit RGB PNG, no ancillary chunks, so equal images give equal bytes.
std::vector<std::uint8_t> encode_png(const AnaglyphImage& image);
void write_png(const std::filesystem::path& path, const AnaglyphImage& image);

/// Any PNG colour type is converted to 8-bit RGB.
AnaglyphImage decode_png(std::span<const std::uint8_t> bytes);
AnaglyphImage read_png(const std::filesystem::path& path);

}  // namespace stereo
