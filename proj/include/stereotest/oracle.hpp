#pragma once

#include <optional>
#include <vector>

#include "stereotest/raster.hpp"
#include "stereotest/renderer.hpp"
#include "stereotest/types.hpp"

namespace stereo {

inline constexpr int kDefaultSearchRange = 16;
inline constexpr double kMinBlockConfidence = 0.5;

/// Block-wise horizontal disparity between the two eye rasters. Lags are
/// red-relative-to-cyan: a positive lag means the red dots sit further right.
struct DisparityMap {
  int image_width = 0;
  int image_height = 0;
  int block_px = 0;
  int stride_px = 0;
  int cols = 0;
  int rows = 0;
  int search_range = 0;
  std::vector<int> lag;            // row-major, cols * rows
  std::vector<double> confidence;  // peak normalized cross-correlation, clamped to [0, 1]

  int lag_at(int col, int row) const { return lag[static_cast<std::size_t>(row * cols + col)]; }
  double confidence_at(int col, int row) const {
    return confidence[static_cast<std::size_t>(row * cols + col)];
  }
  int block_x(int col) const { return col * stride_px; }
  int block_y(int row) const { return row * stride_px; }
};

struct DecoderOptions {
  int search_range = kDefaultSearchRange;
  /// Block side; defaults to 4x the dot size measured from the image.
  std::optional<int> block_px;
};

/// Dot side recovered from the image alone: the shortest horizontal run of lit
/// pixels that does not touch the image border, over both eye rasters.
int estimate_dot_size(const AnaglyphImage& image);

/// Throws LowConfidence when more than half of the blocks peak below 0.5.
DisparityMap estimate_disparity(const AnaglyphImage& image, int search_range);
DisparityMap estimate_disparity(const AnaglyphImage& image, const DecoderOptions& options);

/// Most frequent non-zero lag among confident blocks, or 0 when none.
int dominant_shift(const DisparityMap& map);

struct OrientationEstimate {
  Orientation orientation = Orientation::Up;
  double template_iou = 0.0;  // segmented region vs best gapped-disk template
  std::optional<double> truth_iou;  // segmented region vs supplied ground truth
  double center_x = 0.0;
  double center_y = 0.0;
  double radius = 0.0;
  BitRaster region;
};

/// Segments the largest connected group of blocks whose lag equals
/// expected_shift and fits a gapped disk to it. Throws NoFigure when that
/// group is empty or tiny (under 1% of the blocks) or expected_shift is 0.
OrientationEstimate detect_orientation(const DisparityMap& map, int expected_shift);
OrientationEstimate detect_orientation(const DisparityMap& map, int expected_shift,
                                       const FigureMask& truth);

struct DecodeResult {
  DisparityMap map;
  int pixel_shift = 0;
  std::optional<OrientationEstimate> figure;  // absent when no figure was found
};

DecodeResult decode(const AnaglyphImage& image, const DecoderOptions& options = {});

}  // namespace stereo
