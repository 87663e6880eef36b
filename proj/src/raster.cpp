#include "stereotest/raster.hpp"

#include <algorithm>

#include "stereotest/error.hpp"

namespace stereo {

std::size_t BitRaster::count() const noexcept {
  return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), std::uint8_t{1}));
}

double intersection_over_union(const BitRaster& a, const BitRaster& b) {
  if (a.width() != b.width() || a.height() != b.height()) {
    throw Error(ErrorCode::InvalidInput, "IoU of rasters with different dimensions");
  }
  std::size_t inter = 0;
  std::size_t uni = 0;
  const auto& da = a.data();
  const auto& db = b.data();
  for (std::size_t i = 0; i < da.size(); ++i) {
    inter += static_cast<std::size_t>(da[i] & db[i]);
    uni += static_cast<std::size_t>(da[i] | db[i]);
  }
  return uni == 0 ? 0.0 : static_cast<double>(inter) / static_cast<double>(uni);
}

}  // namespace stereo
