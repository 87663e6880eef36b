#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "stereotest/geometry.hpp"
#include "stereotest/raster.hpp"
#include "stereotest/types.hpp"

namespace stereo {

inline constexpr double kDefaultDotCoverage = 0.25;
/// Background margin around the figure, in dots, on each side.
inline constexpr int kCanvasMarginDots = 10;

struct StereogramSpec {
  DisplayProfile profile;
  double distance_m = 0.0;
  DisparityLevel level;
  Orientation orientation = Orientation::Up;
  double dot_coverage = kDefaultDotCoverage;
  std::uint64_t seed = 0;
  std::optional<int> canvas_px;  // square side; defaults to figure + margin
};

struct Rgb {
  std::uint8_t r = 0;
  std::uint8_t g = 0;
  std::uint8_t b = 0;

  friend bool operator==(const Rgb&, const Rgb&) = default;
};

inline constexpr Rgb kBackground{0, 0, 0};
inline constexpr Rgb kRedDot{255, 0, 0};
inline constexpr Rgb kCyanDot{0, 255, 255};
inline constexpr Rgb kOverlapDot{255, 255, 255};

struct AnaglyphImage {
  int width_px = 0;
  int height_px = 0;
  std::vector<std::uint8_t> pixels;  // row-major RGB triples

  AnaglyphImage() = default;
  AnaglyphImage(int width, int height)
      : width_px(width),
        height_px(height),
        pixels(static_cast<std::size_t>(width) * static_cast<std::size_t>(height) * 3, 0) {}

  Rgb at(int x, int y) const noexcept {
    const std::size_t i = offset(x, y);
    return {pixels[i], pixels[i + 1], pixels[i + 2]};
  }
  void set(int x, int y, Rgb c) noexcept {
    const std::size_t i = offset(x, y);
    pixels[i] = c.r;
    pixels[i + 1] = c.g;
    pixels[i + 2] = c.b;
  }

  friend bool operator==(const AnaglyphImage&, const AnaglyphImage&) = default;

 private:
  std::size_t offset(int x, int y) const noexcept {
    return (static_cast<std::size_t>(y) * static_cast<std::size_t>(width_px) +
            static_cast<std::size_t>(x)) * 3;
  }
};

using FigureMask = BitRaster;

enum class Eye { LeftRed, RightCyan };

/// Throws unless coverage and shift are usable and the canvas holds the figure.
void validate(const StereogramSpec& spec);

/// Convenience: spec for the given 1-based level of `table`.
StereogramSpec make_stereogram_spec(const DisplayProfile& profile, const LevelTable& table,
                                    int level_index, Orientation orientation,
                                    std::uint64_t seed);

int canvas_size_px(const StereogramSpec& spec);

/// Per-cell dot probability of the jittered grid that yields `coverage` as the
/// expected fraction of lit pixels for square dots of side `dot_px`.
double cell_probability_for_coverage(double coverage, int dot_px);

/// Filled disk of the stimulus diameter, centered on the canvas, with a 90 degree
/// wedge removed around the orientation direction.
FigureMask ground_truth_mask(const StereogramSpec& spec);

AnaglyphImage render(const StereogramSpec& spec);

/// Dot presence for one eye: red component for the left eye, green/blue for the right.
BitRaster channel(const AnaglyphImage& image, Eye eye);

}  // namespace stereo
