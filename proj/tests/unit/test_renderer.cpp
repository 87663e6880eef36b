#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "stereotest/error.hpp"
#include "stereotest/geometry.hpp"
#include "stereotest/renderer.hpp"

using namespace stereo;

namespace {

const DisplayProfile kRetina{264.0, 2048, 1536};

StereogramSpec spec_for(double distance, int level, Orientation o, std::uint64_t seed,
                        double coverage = kDefaultDotCoverage) {
  auto spec = make_stereogram_spec(kRetina, build_level_table(kRetina, distance), level, o, seed);
  spec.dot_coverage = coverage;
  return spec;
}

double fraction_lit(const BitRaster& r) {
  return static_cast<double>(r.count()) / (static_cast<double>(r.width()) * r.height());
}

BitRaster shifted(const BitRaster& m, int dx) {
  BitRaster out(m.width(), m.height());
  for (int y = 0; y < m.height(); ++y)
    for (int x = 0; x < m.width(); ++x)
      if (m.at_or_false(x - dx, y)) out.set(x, y);
  return out;
}

// Lit fraction inside and outside a region.
std::pair<double, double> densities(const BitRaster& lit, const BitRaster& region) {
  double in = 0, in_lit = 0, out = 0, out_lit = 0;
  for (int y = 0; y < lit.height(); ++y)
    for (int x = 0; x < lit.width(); ++x) {
      if (region.at(x, y)) {
        ++in;
        in_lit += lit.at(x, y);
      } else {
        ++out;
        out_lit += lit.at(x, y);
      }
    }
  return {in_lit / in, out_lit / out};
}

}  // namespace

TEST(Renderer, MaskAreaIsThreeQuartersOfTheDisk) {
  for (auto o : kAllOrientations) {
    const auto spec = spec_for(0.5, 3, o, 1);
    const auto mask = ground_truth_mask(spec);
    const double r = stimulus_size_px(kRetina) / 2.0;
    EXPECT_NEAR(static_cast<double>(mask.count()) / (std::numbers::pi * r * r), 0.75, 0.01);
  }
}

TEST(Renderer, MaskOrientationsAreRotationsOfEachOther) {
  const auto up = ground_truth_mask(spec_for(3.0, 1, Orientation::Up, 1));
  const auto right = ground_truth_mask(spec_for(3.0, 1, Orientation::Right, 1));
  const auto down = ground_truth_mask(spec_for(3.0, 1, Orientation::Down, 1));
  const auto left = ground_truth_mask(spec_for(3.0, 1, Orientation::Left, 1));
  const int n = up.width();
  // Quarter turn clockwise about the canvas centre: (x, y) -> (n-1-y, x).
  for (int y = 0; y < n; ++y) {
    for (int x = 0; x < n; ++x) {
      ASSERT_EQ(up.at(x, y), right.at(n - 1 - y, x));
      ASSERT_EQ(right.at(x, y), down.at(n - 1 - y, x));
      ASSERT_EQ(down.at(x, y), left.at(n - 1 - y, x));
    }
  }
}

TEST(Renderer, GapPointsTheNamedWay) {
  const auto spec = spec_for(3.0, 1, Orientation::Up, 1);
  const auto mask = ground_truth_mask(spec);
  const int c = mask.width() / 2;
  const int r = stimulus_size_px(kRetina) / 2;
  EXPECT_FALSE(mask.at(c, c - r / 2));  // above the centre: gap
  EXPECT_TRUE(mask.at(c, c + r / 2));
  EXPECT_TRUE(mask.at(c - r / 2, c));
  EXPECT_TRUE(mask.at(c + r / 2, c));
}

TEST(Renderer, DeterministicPerSeed) {
  const auto a = render(spec_for(0.5, 4, Orientation::Left, 42));
  const auto b = render(spec_for(0.5, 4, Orientation::Left, 42));
  const auto c = render(spec_for(0.5, 4, Orientation::Left, 43));
  EXPECT_TRUE(a == b);
  EXPECT_FALSE(a == c);
}

TEST(Renderer, OnlyFourColours) {
  const auto img = render(spec_for(3.0, 7, Orientation::Down, 5));
  for (int y = 0; y < img.height_px; ++y)
    for (int x = 0; x < img.width_px; ++x) {
      const Rgb p = img.at(x, y);
      ASSERT_TRUE(p == kBackground || p == kRedDot || p == kCyanDot || p == kOverlapDot);
    }
}

TEST(Renderer, CanvasHoldsFigurePlusMargin) {
  const auto spec = spec_for(3.0, 1, Orientation::Up, 1);
  EXPECT_EQ(canvas_size_px(spec), 1023 + 2 * kCanvasMarginDots * 12);
  auto small = spec;
  small.canvas_px = 1000;
  EXPECT_THROW(render(small), Error);
}

TEST(Renderer, CyanFieldDoesNotDependOnDisparityOrOrientation) {
  const auto a = channel(render(spec_for(0.5, 1, Orientation::Up, 9)), Eye::RightCyan);
  const auto b = channel(render(spec_for(0.5, 10, Orientation::Right, 9)), Eye::RightCyan);
  EXPECT_TRUE(a == b);
}

TEST(Renderer, RedFigureIsTheCyanFigureShifted) {
  for (double distance : {0.5, 3.0}) {
    const auto spec = spec_for(distance, 6, Orientation::Up, 11);
    const int s = spec.level.pixel_shift;
    const auto img = render(spec);
    const auto red = channel(img, Eye::LeftRed);
    const auto cyan = channel(img, Eye::RightCyan);
    // A square well inside the lower half of the disk, away from every edge.
    const int c = img.width_px / 2;
    const int r = stimulus_size_px(kRetina) / 2;
    for (int y = c + r / 8; y < c + r / 2; ++y)
      for (int x = c - r / 4; x < c + r / 4; ++x) ASSERT_EQ(red.at(x + s, y), cyan.at(x, y));
    // Far corner, pure background.
    for (int y = 0; y < r / 4; ++y)
      for (int x = 0; x < r / 4; ++x) ASSERT_EQ(red.at(x, y), cyan.at(x, y));
  }
}

TEST(Renderer, ZeroShiftGivesIdenticalChannels) {
  auto spec = spec_for(0.5, 1, Orientation::Up, 3);
  spec.level.pixel_shift = 0;
  const auto img = render(spec);
  EXPECT_TRUE(channel(img, Eye::LeftRed) == channel(img, Eye::RightCyan));
}

TEST(Renderer, CellProbabilityHitsCoverage) {
  for (int dot : {1, 2, 5, 12}) {
    for (double cov : {0.15, 0.25, 0.40}) {
      const double p = cell_probability_for_coverage(cov, dot);
      EXPECT_GT(p, 0.0);
      EXPECT_LE(p, 1.0);
    }
  }
  EXPECT_THROW(cell_probability_for_coverage(0.0, 2), Error);
  EXPECT_THROW(cell_probability_for_coverage(0.99, 2), Error);
}

TEST(Renderer, MeasuredCoverageMatchesTarget) {
  for (double distance : {0.5, 3.0}) {
    for (double cov : {0.15, 0.25, 0.40}) {
      const auto img = render(spec_for(distance, 5, Orientation::Left, 77, cov));
      EXPECT_NEAR(fraction_lit(channel(img, Eye::RightCyan)), cov, 0.01);
      EXPECT_NEAR(fraction_lit(channel(img, Eye::LeftRed)), cov, 0.01);
    }
  }
}

TEST(Renderer, NoMonocularDensityCue) {
  for (double distance : {0.5, 3.0}) {
    for (double cov : {0.15, 0.40}) {
      const int level = 10;
      double red_rel = 0.0, cyan_rel = 0.0;
      const int seeds = 20;
      for (int seed = 1; seed <= seeds; ++seed) {
        const auto spec = spec_for(distance, level, Orientation::Right, static_cast<std::uint64_t>(seed), cov);
        const auto mask = ground_truth_mask(spec);
        const auto img = render(spec);
        const auto [cin, cout] = densities(channel(img, Eye::RightCyan), mask);
        const auto [rin, rout] = densities(channel(img, Eye::LeftRed), shifted(mask, spec.level.pixel_shift));
        cyan_rel += std::abs(cin - cout) / cout;
        red_rel += std::abs(rin - rout) / rout;
      }
      EXPECT_LT(cyan_rel / seeds, 0.05) << distance << " " << cov;
      EXPECT_LT(red_rel / seeds, 0.05) << distance << " " << cov;
    }
  }
}

TEST(Renderer, InvalidSpecs) {
  auto spec = spec_for(0.5, 1, Orientation::Up, 1);
  spec.dot_coverage = 1.5;
  EXPECT_THROW(render(spec), Error);
  spec = spec_for(0.5, 1, Orientation::Up, 1);
  spec.level.pixel_shift = -1;
  EXPECT_THROW(render(spec), Error);
}
