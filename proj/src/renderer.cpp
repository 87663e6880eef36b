#include "stereotest/renderer.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "stereotest/error.hpp"

namespace stereo {

namespace {

// Raw-bit draws keep the dot field identical across standard libraries,
// which std::uniform_*_distribution does not guarantee.
class DotRng {
 public:
  DotRng(std::uint64_t seed, std::uint32_t stream) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      stream};
    engine_.seed(seq);
  }

  double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  int below(int n) { return static_cast<int>(engine_() % static_cast<std::uint64_t>(n)); }

 private:
  std::mt19937_64 engine_;
};

constexpr std::uint32_t kBaseStream = 1;
constexpr std::uint32_t kRefillStream = 2;

// Calls fn(origin_x, origin_y) for every dot of a jittered grid covering the
// canvas. Cell -1 is included so dots spilling in from the top/left exist.
template <typename Fn>
void for_each_dot(DotRng& rng, int canvas, int dot, double cell_probability, Fn&& fn) {
  const int cells = canvas / dot + 1;
  for (int cy = -1; cy < cells; ++cy) {
    for (int cx = -1; cx < cells; ++cx) {
      const bool present = rng.unit() < cell_probability;
      const int jx = rng.below(dot);
      const int jy = rng.below(dot);
      if (present) fn(cx * dot + jx, cy * dot + jy);
    }
  }
}

void paint_dot(BitRaster& raster, int ox, int oy, int dot) {
  const int x0 = std::max(ox, 0);
  const int y0 = std::max(oy, 0);
  const int x1 = std::min(ox + dot, raster.width());
  const int y1 = std::min(oy + dot, raster.height());
  for (int y = y0; y < y1; ++y) {
    for (int x = x0; x < x1; ++x) raster.set(x, y);
  }
}

double expected_coverage(double p, int dot) {
  const double d = dot;
  double total = 0.0;
  for (int u = 0; u < dot; ++u) {
    const double qx[2] = {(u + 1) / d, (d - 1 - u) / d};
    for (int v = 0; v < dot; ++v) {
      const double qy[2] = {(v + 1) / d, (d - 1 - v) / d};
      double empty = 1.0;
      for (double a : qx) {
        for (double b : qy) empty *= 1.0 - p * a * b;
      }
      total += 1.0 - empty;
    }
  }
  return total / (d * d);
}

bool in_gap(double dx, double dy, Orientation o) {
  // dy grows downward; the removed wedge spans +-45 degrees around the direction.
  switch (o) {
    case Orientation::Up: return -dy > std::abs(dx);
    case Orientation::Down: return dy > std::abs(dx);
    case Orientation::Left: return -dx > std::abs(dy);
    case Orientation::Right: return dx > std::abs(dy);
  }
  return false;
}

}  // namespace

void validate(const StereogramSpec& spec) {
  validate(spec.profile);
  if (!(spec.distance_m > 0.0)) throw Error(ErrorCode::InvalidGeometry, "distance must be > 0");
  if (!(spec.dot_coverage > 0.0 && spec.dot_coverage < 1.0)) {
    throw Error(ErrorCode::InvalidSpec, "dot coverage must be in (0, 1)");
  }
  if (spec.level.pixel_shift < 0) throw Error(ErrorCode::InvalidSpec, "pixel shift must be >= 0");
  const int figure = stimulus_size_px(spec.profile);
  if (spec.canvas_px && *spec.canvas_px < figure) {
    throw Error(ErrorCode::StimulusTooLarge, "canvas of " + std::to_string(*spec.canvas_px) +
                                                 " px cannot hold a " + std::to_string(figure) +
                                                 " px figure");
  }
}

StereogramSpec make_stereogram_spec(const DisplayProfile& profile, const LevelTable& table,
                                    int level_index, Orientation orientation,
                                    std::uint64_t seed) {
  StereogramSpec spec;
  spec.profile = profile;
  spec.distance_m = table.distance_m;
  spec.level = table.level(level_index);
  spec.orientation = orientation;
  spec.seed = seed;
  return spec;
}

int canvas_size_px(const StereogramSpec& spec) {
  if (spec.canvas_px) return *spec.canvas_px;
  return stimulus_size_px(spec.profile) +
         2 * kCanvasMarginDots * dot_size_px(spec.profile, spec.distance_m);
}

double cell_probability_for_coverage(double coverage, int dot_px) {
  if (!(coverage > 0.0 && coverage < 1.0) || dot_px < 1) {
    throw Error(ErrorCode::InvalidSpec, "coverage must be in (0, 1) and dot size >= 1");
  }
  if (expected_coverage(1.0, dot_px) < coverage) {
    throw Error(ErrorCode::InvalidSpec, "coverage " + std::to_string(coverage) +
                                            " is unreachable with " + std::to_string(dot_px) +
                                            " px dots");
  }
  double lo = 0.0;
  double hi = 1.0;
  for (int i = 0; i < 60; ++i) {
    const double mid = 0.5 * (lo + hi);
    (expected_coverage(mid, dot_px) < coverage ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

FigureMask ground_truth_mask(const StereogramSpec& spec) {
  validate(spec);
  const int canvas = canvas_size_px(spec);
  const double radius = stimulus_size_px(spec.profile) / 2.0;
  const double center = (canvas - 1) / 2.0;
  FigureMask mask(canvas, canvas);
  for (int y = 0; y < canvas; ++y) {
    const double dy = y - center;
    for (int x = 0; x < canvas; ++x) {
      const double dx = x - center;
      if (dx * dx + dy * dy <= radius * radius && !in_gap(dx, dy, spec.orientation)) {
        mask.set(x, y);
      }
    }
  }
  return mask;
}

AnaglyphImage render(const StereogramSpec& spec) {
  const FigureMask mask = ground_truth_mask(spec);
  const int canvas = mask.width();
  const int dot = dot_size_px(spec.profile, spec.distance_m);
  const int shift = spec.level.pixel_shift;
  const double p = cell_probability_for_coverage(spec.dot_coverage, dot);
  const int half = dot / 2;

  BitRaster left(canvas, canvas);
  BitRaster right(canvas, canvas);

  // Figure dots move right by `shift` in the red (left-eye) field and occlude
  // whatever background they land on; the strip they vacate gets fresh dots.
  DotRng base(spec.seed, kBaseStream);
  for_each_dot(base, canvas, dot, p, [&](int ox, int oy) {
    const int cx = ox + half;
    const int cy = oy + half;
    paint_dot(right, ox, oy, dot);
    if (mask.at_or_false(cx, cy)) {
      paint_dot(left, ox + shift, oy, dot);
    } else if (!mask.at_or_false(cx - shift, cy)) {
      paint_dot(left, ox, oy, dot);
    }
  });
  if (shift > 0) {
    DotRng refill(spec.seed, kRefillStream);
    for_each_dot(refill, canvas, dot, p, [&](int ox, int oy) {
      const int cx = ox + half;
      const int cy = oy + half;
      if (mask.at_or_false(cx, cy) && !mask.at_or_false(cx - shift, cy)) {
        paint_dot(left, ox, oy, dot);
      }
    });
  }

  AnaglyphImage image(canvas, canvas);
  for (int y = 0; y < canvas; ++y) {
    for (int x = 0; x < canvas; ++x) {
      const bool r = left.at(x, y);
      const bool c = right.at(x, y);
      if (r && c) {
        image.set(x, y, kOverlapDot);
      } else if (r) {
        image.set(x, y, kRedDot);
      } else if (c) {
        image.set(x, y, kCyanDot);
      }
    }
  }
  return image;
}

BitRaster channel(const AnaglyphImage& image, Eye eye) {
  BitRaster out(image.width_px, image.height_px);
  for (int y = 0; y < image.height_px; ++y) {
    for (int x = 0; x < image.width_px; ++x) {
      const Rgb px = image.at(x, y);
      const bool lit = eye == Eye::LeftRed ? px.r >= 128 : px.g >= 128;
      if (lit) out.set(x, y);
    }
  }
  return out;
}

}  // namespace stereo
