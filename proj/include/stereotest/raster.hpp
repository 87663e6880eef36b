#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace stereo {

/// Row-major boolean raster.
class BitRaster {
 public:
  BitRaster() = default;
  BitRaster(int width, int height, bool fill = false)
      : width_(width),
        height_(height),
        bits_(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), fill ? 1 : 0) {}

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  bool contains(int x, int y) const noexcept {
    return x >= 0 && y >= 0 && x < width_ && y < height_;
  }

  bool at(int x, int y) const noexcept { return bits_[index(x, y)] != 0; }
  /// False outside the raster.
  bool at_or_false(int x, int y) const noexcept { return contains(x, y) && at(x, y); }
  void set(int x, int y, bool value = true) noexcept { bits_[index(x, y)] = value ? 1 : 0; }

  std::size_t count() const noexcept;
  const std::vector<std::uint8_t>& data() const noexcept { return bits_; }

  friend bool operator==(const BitRaster&, const BitRaster&) = default;

 private:
  std::size_t index(int x, int y) const noexcept {
    return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) +
           static_cast<std::size_t>(x);
  }

  int width_ = 0;
  int height_ = 0;
  std::vector<std::uint8_t> bits_;
};

/// |a & b| / |a | b|; 0 when both are empty. Rasters must share dimensions.
double intersection_over_union(const BitRaster& a, const BitRaster& b);

}  // namespace stereo
