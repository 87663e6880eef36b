#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "stereotest/types.hpp"

namespace stereo {

inline constexpr double kMetersPerInch = 0.0254;
inline constexpr double kArcsecPerRadian = 206264.806247;  // 180 * 3600 / pi
inline constexpr double kReferenceDistanceM = 0.5;
inline constexpr double kDefaultIpdM = 0.06;
inline constexpr int kDefaultLevelCount = 10;
inline constexpr double kHdOutsideLimitArcsec = 66.0;
/// Dot side angle, 0.125 logMAR.
inline constexpr double kDotAngleArcmin = 1.32;
/// The figure subtends this angle at kStimulusDesignDistanceM and keeps the
/// same physical size at every other distance.
inline constexpr double kStimulusAngleDeg = 1.88;
inline constexpr double kStimulusDesignDistanceM = 3.0;
inline constexpr int kHdMeasureCount = 6;

struct DisplayProfile {
  double ppi = 0.0;
  int width_px = 0;
  int height_px = 0;

  friend bool operator==(const DisplayProfile&, const DisplayProfile&) = default;
};

/// Throws InvalidProfile unless ppi > 0 (finite) and both dimensions are positive.
void validate(const DisplayProfile& profile);

/// Named presets: "ipad-retina-264" / "264" and "ipad-mini-326" / "326".
std::optional<DisplayProfile> display_preset(std::string_view name);
std::vector<std::string> display_preset_names();

struct ViewingGeometry {
  double distance_m = 0.0;
  double reference_distance_m = kReferenceDistanceM;
  double ipd_m = kDefaultIpdM;
};

void validate(const ViewingGeometry& geometry);

struct DisparityLevel {
  int index = 0;        // 1 = finest
  int pixel_shift = 0;  // red-vs-cyan displacement in whole pixels
  double arcsec = 0.0;  // full precision
  long arcsec_rounded = 0;

  friend bool operator==(const DisparityLevel&, const DisparityLevel&) = default;
};

struct LevelTable {
  double distance_m = 0.0;
  double reference_distance_m = kReferenceDistanceM;
  std::vector<DisparityLevel> levels;  // finest first
  std::optional<int> scale_k;

  int size() const noexcept { return static_cast<int>(levels.size()); }
  bool empty() const noexcept { return levels.empty(); }
  /// 1-based lookup; throws InvalidInput when out of range.
  const DisparityLevel& level(int index) const;
  const DisparityLevel& finest() const { return level(1); }
  const DisparityLevel& coarsest() const { return level(size()); }

  friend bool operator==(const LevelTable&, const LevelTable&) = default;
};

struct HdMeasurement {
  std::vector<double> delta_z_m;  // six signed rod offsets
  double ipd_m = kDefaultIpdM;
  double distance_m = 0.0;
};

long round_half_up(double value);

double pixel_pitch(const DisplayProfile& profile);

/// Angular disparity of a whole-pixel shift viewed at distance_m, small-angle.
double disparity_arcsec(int shift_px, const DisplayProfile& profile, double distance_m);

/// Inverse of disparity_arcsec, rounded to the nearest whole pixel.
int pixel_shift_for_arcsec(double arcsec, const DisplayProfile& profile, double distance_m);

LevelTable build_level_table(const DisplayProfile& profile, double distance_m,
                             int n_levels = kDefaultLevelCount,
                             double reference_distance_m = kReferenceDistanceM);

/// k = distance / reference when the ratio is an integer (within 1e-9);
/// throws NotIntegerMultiple otherwise.
int distance_scale_k(double distance_m, double reference_m);

/// Two-rod disparity ipd * |dz| / z^2, in arcsec.
double hd_arcsec(double ipd_m, double delta_z_m, double distance_m);

/// Mean of the six per-measure disparities; OL when the mean exceeds the limit.
Acuity hd_protocol(const HdMeasurement& measurement,
                   double ol_limit_arcsec = kHdOutsideLimitArcsec);

int dot_size_px(const DisplayProfile& profile, double distance_m);

/// Side of the square that bounds the gapped disk. Throws StimulusTooLarge
/// when it does not fit on the display.
int stimulus_size_px(const DisplayProfile& profile);

}  // namespace stereo
