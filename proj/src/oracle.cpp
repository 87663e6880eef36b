#include "stereotest/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <numbers>
#include <queue>

#include "stereotest/error.hpp"

namespace stereo {

namespace {

// Summed-area table; rectangle queries are clamped to the raster, so anything
// outside counts as zero.
class SummedArea {
 public:
  SummedArea(int width, int height)
      : width_(width), height_(height),
        sums_(static_cast<std::size_t>(width + 1) * static_cast<std::size_t>(height + 1), 0) {}

  template <typename Fn>
  void fill(Fn&& value_at) {
    for (int y = 0; y < height_; ++y) {
      std::int32_t row = 0;
      for (int x = 0; x < width_; ++x) {
        row += value_at(x, y) ? 1 : 0;
        at(x + 1, y + 1) = at(x + 1, y) + row;
      }
    }
  }

  std::int32_t sum(int x0, int y0, int x1, int y1) const {
    x0 = std::clamp(x0, 0, width_);
    x1 = std::clamp(x1, 0, width_);
    y0 = std::clamp(y0, 0, height_);
    y1 = std::clamp(y1, 0, height_);
    if (x1 <= x0 || y1 <= y0) return 0;
    return at(x1, y1) - at(x0, y1) - at(x1, y0) + at(x0, y0);
  }

 private:
  std::int32_t& at(int x, int y) {
    return sums_[static_cast<std::size_t>(y) * static_cast<std::size_t>(width_ + 1) +
                 static_cast<std::size_t>(x)];
  }
  std::int32_t at(int x, int y) const {
    return sums_[static_cast<std::size_t>(y) * static_cast<std::size_t>(width_ + 1) +
                 static_cast<std::size_t>(x)];
  }

  int width_;
  int height_;
  std::vector<std::int32_t> sums_;
};

int shortest_interior_run(const BitRaster& raster) {
  int best = std::numeric_limits<int>::max();
  for (int y = 0; y < raster.height(); ++y) {
    int x = 0;
    while (x < raster.width()) {
      if (!raster.at(x, y)) {
        ++x;
        continue;
      }
      const int start = x;
      while (x < raster.width() && raster.at(x, y)) ++x;
      if (start > 0 && x < raster.width()) best = std::min(best, x - start);
    }
  }
  return best;
}

std::vector<int> lag_order(int search_range) {
  std::vector<int> order{0};
  for (int l = 1; l <= search_range; ++l) {
    order.push_back(l);
    order.push_back(-l);
  }
  return order;
}

double wrap_angle(double a) {
  while (a > std::numbers::pi) a -= 2.0 * std::numbers::pi;
  while (a < -std::numbers::pi) a += 2.0 * std::numbers::pi;
  return a;
}

double gap_direction(Orientation o) {
  // Mathematical angle with +y pointing up on screen.
  switch (o) {
    case Orientation::Up: return std::numbers::pi / 2.0;
    case Orientation::Down: return -std::numbers::pi / 2.0;
    case Orientation::Left: return std::numbers::pi;
    case Orientation::Right: return 0.0;
  }
  return 0.0;
}

BitRaster gapped_disk_template(int width, int height, double cx, double cy, double radius,
                               Orientation o) {
  BitRaster out(width, height);
  const double dir = gap_direction(o);
  const int y0 = std::max(0, static_cast<int>(std::floor(cy - radius)));
  const int y1 = std::min(height, static_cast<int>(std::ceil(cy + radius)) + 1);
  const int x0 = std::max(0, static_cast<int>(std::floor(cx - radius)));
  const int x1 = std::min(width, static_cast<int>(std::ceil(cx + radius)) + 1);
  for (int y = y0; y < y1; ++y) {
    const double py = cy - (y + 0.5);
    for (int x = x0; x < x1; ++x) {
      const double px = (x + 0.5) - cx;
      if (px * px + py * py > radius * radius) continue;
      const double off = std::abs(wrap_angle(std::atan2(py, px) - dir));
      if (off >= std::numbers::pi / 4.0) out.set(x, y);
    }
  }
  return out;
}

}  // namespace

int estimate_dot_size(const AnaglyphImage& image) {
  const int run = std::min(shortest_interior_run(channel(image, Eye::LeftRed)),
                           shortest_interior_run(channel(image, Eye::RightCyan)));
  if (run == std::numeric_limits<int>::max()) {
    throw Error(ErrorCode::LowConfidence, "image has no interior dots to size");
  }
  return run;
}

DisparityMap estimate_disparity(const AnaglyphImage& image, int search_range) {
  DecoderOptions options;
  options.search_range = search_range;
  return estimate_disparity(image, options);
}

DisparityMap estimate_disparity(const AnaglyphImage& image, const DecoderOptions& options) {
  if (options.search_range < 0) throw Error(ErrorCode::InvalidInput, "search range must be >= 0");
  const int block = options.block_px ? *options.block_px : 4 * estimate_dot_size(image);
  if (block < 2) throw Error(ErrorCode::InvalidInput, "block side must be >= 2");
  const int w = image.width_px;
  const int h = image.height_px;
  if (w < block || h < block) throw Error(ErrorCode::InvalidInput, "image smaller than one block");

  const BitRaster red = channel(image, Eye::LeftRed);
  const BitRaster cyan = channel(image, Eye::RightCyan);

  DisparityMap map;
  map.image_width = w;
  map.image_height = h;
  map.block_px = block;
  map.stride_px = block / 2;
  map.cols = (w - block) / map.stride_px + 1;
  map.rows = (h - block) / map.stride_px + 1;
  map.search_range = options.search_range;
  const std::size_t n_blocks = static_cast<std::size_t>(map.cols) * static_cast<std::size_t>(map.rows);
  map.lag.assign(n_blocks, 0);
  map.confidence.assign(n_blocks, 0.0);
  std::vector<double> best(n_blocks, -std::numeric_limits<double>::infinity());

  SummedArea red_sum(w, h);
  red_sum.fill([&](int x, int y) { return red.at(x, y); });
  SummedArea cyan_sum(w, h);
  cyan_sum.fill([&](int x, int y) { return cyan.at(x, y); });

  const double n = static_cast<double>(block) * block;
  SummedArea product(w, h);
  for (int lag : lag_order(options.search_range)) {
    product.fill([&](int x, int y) { return cyan.at(x, y) && red.at_or_false(x + lag, y); });
    for (int row = 0; row < map.rows; ++row) {
      const int y0 = map.block_y(row);
      for (int col = 0; col < map.cols; ++col) {
        const int x0 = map.block_x(col);
        const double sc = cyan_sum.sum(x0, y0, x0 + block, y0 + block);
        const double sr = red_sum.sum(x0 + lag, y0, x0 + lag + block, y0 + block);
        const double src = product.sum(x0, y0, x0 + block, y0 + block);
        const double var_c = sc - sc * sc / n;
        const double var_r = sr - sr * sr / n;
        double ncc = 0.0;
        if (var_c > 0.0 && var_r > 0.0) ncc = (src - sr * sc / n) / std::sqrt(var_c * var_r);
        const std::size_t i = static_cast<std::size_t>(row * map.cols + col);
        if (ncc > best[i] + 1e-12) {
          best[i] = ncc;
          map.lag[i] = lag;
        }
      }
    }
  }

  std::size_t weak = 0;
  for (std::size_t i = 0; i < n_blocks; ++i) {
    map.confidence[i] = std::clamp(best[i], 0.0, 1.0);
    if (map.confidence[i] < kMinBlockConfidence) ++weak;
  }
  if (2 * weak > n_blocks) {
    throw Error(ErrorCode::LowConfidence, std::to_string(weak) + " of " +
                                              std::to_string(n_blocks) +
                                              " blocks have no clear correlation peak");
  }
  return map;
}

int dominant_shift(const DisparityMap& map) {
  std::map<int, std::size_t> votes;
  for (std::size_t i = 0; i < map.lag.size(); ++i) {
    if (map.lag[i] != 0 && map.confidence[i] >= kMinBlockConfidence) ++votes[map.lag[i]];
  }
  int shift = 0;
  std::size_t most = 0;
  for (const auto& [lag, count] : votes) {
    if (count > most) {
      most = count;
      shift = lag;
    }
  }
  return shift;
}

OrientationEstimate detect_orientation(const DisparityMap& map, int expected_shift) {
  if (expected_shift == 0) throw Error(ErrorCode::NoFigure, "zero disparity defines no figure");

  const auto idx = [&](int c, int r) { return static_cast<std::size_t>(r * map.cols + c); };
  std::vector<std::uint8_t> selected(map.lag.size(), 0);
  for (std::size_t i = 0; i < map.lag.size(); ++i) {
    selected[i] = map.lag[i] == expected_shift && map.confidence[i] >= kMinBlockConfidence;
  }

  // Largest 4-connected component on the block grid.
  std::vector<int> label(map.lag.size(), -1);
  std::vector<std::size_t> component;
  for (int r = 0; r < map.rows; ++r) {
    for (int c = 0; c < map.cols; ++c) {
      if (!selected[idx(c, r)] || label[idx(c, r)] >= 0) continue;
      std::vector<std::size_t> members;
      std::queue<std::pair<int, int>> todo;
      todo.emplace(c, r);
      label[idx(c, r)] = 1;
      while (!todo.empty()) {
        const auto [qc, qr] = todo.front();
        todo.pop();
        members.push_back(idx(qc, qr));
        const int nb[4][2] = {{qc + 1, qr}, {qc - 1, qr}, {qc, qr + 1}, {qc, qr - 1}};
        for (const auto& [nc, nr] : nb) {
          if (nc < 0 || nr < 0 || nc >= map.cols || nr >= map.rows) continue;
          if (!selected[idx(nc, nr)] || label[idx(nc, nr)] >= 0) continue;
          label[idx(nc, nr)] = 1;
          todo.emplace(nc, nr);
        }
      }
      if (members.size() > component.size()) component = std::move(members);
    }
  }
  // Isolated blocks that match by chance are noise, not a figure.
  const std::size_t min_blocks = std::max<std::size_t>(4, map.lag.size() / 100);
  if (component.size() < min_blocks) {
    throw Error(ErrorCode::NoFigure, "no figure-sized group of blocks carries lag " +
                                         std::to_string(expected_shift));
  }

  // Each block contributes its central stride x stride cell.
  OrientationEstimate est;
  est.region = BitRaster(map.image_width, map.image_height);
  const int inset = map.stride_px / 2;
  int left = map.image_width, right = -1, top = map.image_height, bottom = -1;
  for (std::size_t i : component) {
    const int c = static_cast<int>(i) % map.cols;
    const int r = static_cast<int>(i) / map.cols;
    const int x0 = map.block_x(c) + inset;
    const int y0 = map.block_y(r) + inset;
    for (int y = y0; y < std::min(y0 + map.stride_px, map.image_height); ++y) {
      for (int x = x0; x < std::min(x0 + map.stride_px, map.image_width); ++x) {
        est.region.set(x, y);
      }
    }
    left = std::min(left, x0);
    top = std::min(top, y0);
    right = std::max(right, std::min(x0 + map.stride_px, map.image_width));
    bottom = std::max(bottom, std::min(y0 + map.stride_px, map.image_height));
  }

  // The axis perpendicular to the gap keeps the full diameter; the side opposite
  // the gap keeps the full radius.
  est.template_iou = -1.0;
  for (Orientation o : kAllOrientations) {
    double cx = 0.0, cy = 0.0, radius = 0.0;
    switch (o) {
      case Orientation::Up:
      case Orientation::Down:
        radius = (right - left) / 2.0;
        cx = (left + right) / 2.0;
        cy = o == Orientation::Up ? bottom - radius : top + radius;
        break;
      case Orientation::Left:
      case Orientation::Right:
        radius = (bottom - top) / 2.0;
        cy = (top + bottom) / 2.0;
        cx = o == Orientation::Left ? right - radius : left + radius;
        break;
    }
    const BitRaster candidate =
        gapped_disk_template(map.image_width, map.image_height, cx, cy, radius, o);
    const double iou = intersection_over_union(candidate, est.region);
    if (iou > est.template_iou) {
      est.template_iou = iou;
      est.orientation = o;
      est.center_x = cx;
      est.center_y = cy;
      est.radius = radius;
    }
  }
  return est;
}

OrientationEstimate detect_orientation(const DisparityMap& map, int expected_shift,
                                       const FigureMask& truth) {
  OrientationEstimate est = detect_orientation(map, expected_shift);
  est.truth_iou = intersection_over_union(est.region, truth);
  return est;
}

DecodeResult decode(const AnaglyphImage& image, const DecoderOptions& options) {
  DecodeResult result;
  result.map = estimate_disparity(image, options);
  result.pixel_shift = dominant_shift(result.map);
  if (result.pixel_shift != 0) {
    try {
      result.figure = detect_orientation(result.map, result.pixel_shift);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::NoFigure) throw;
    }
  }
  return result;
}

}  // namespace stereo
