#include "stereotest/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "stereotest/error.hpp"

namespace stereo {

namespace {

constexpr double kIntegerTolerance = 1e-9;

double arcmin_to_rad(double arcmin) { return arcmin / 60.0 * std::numbers::pi / 180.0; }
double deg_to_rad(double deg) { return deg * std::numbers::pi / 180.0; }

void require_distance(double distance_m, const char* what) {
  if (!(distance_m > 0.0) || !std::isfinite(distance_m)) {
    throw Error(ErrorCode::InvalidGeometry, std::string(what) + " must be > 0");
  }
}

}  // namespace

void validate(const DisplayProfile& profile) {
  if (!(profile.ppi > 0.0) || !std::isfinite(profile.ppi)) {
    throw Error(ErrorCode::InvalidProfile, "ppi must be > 0");
  }
  if (profile.width_px <= 0 || profile.height_px <= 0) {
    throw Error(ErrorCode::InvalidProfile, "display dimensions must be > 0");
  }
}

std::optional<DisplayProfile> display_preset(std::string_view name) {
  if (name == "ipad-retina-264" || name == "264") return DisplayProfile{264.0, 2048, 1536};
  if (name == "ipad-mini-326" || name == "326") return DisplayProfile{326.0, 2048, 1536};
  return std::nullopt;
}

std::vector<std::string> display_preset_names() { return {"ipad-retina-264", "ipad-mini-326"}; }

void validate(const ViewingGeometry& geometry) {
  require_distance(geometry.distance_m, "distance");
  require_distance(geometry.reference_distance_m, "reference distance");
  if (!(geometry.ipd_m > 0.0)) throw Error(ErrorCode::InvalidGeometry, "ipd must be > 0");
}

const DisparityLevel& LevelTable::level(int index) const {
  if (index < 1 || index > size()) {
    throw Error(ErrorCode::InvalidInput, "level " + std::to_string(index) + " outside 1.." +
                                             std::to_string(size()));
  }
  return levels[static_cast<std::size_t>(index - 1)];
}

long round_half_up(double value) { return static_cast<long>(std::floor(value + 0.5)); }

double pixel_pitch(const DisplayProfile& profile) {
  if (!(profile.ppi > 0.0) || !std::isfinite(profile.ppi)) {
    throw Error(ErrorCode::InvalidProfile, "ppi must be > 0");
  }
  return kMetersPerInch / profile.ppi;
}

double disparity_arcsec(int shift_px, const DisplayProfile& profile, double distance_m) {
  const double pitch = pixel_pitch(profile);
  require_distance(distance_m, "distance");
  if (shift_px < 0) throw Error(ErrorCode::InvalidGeometry, "pixel shift must be >= 0");
  return static_cast<double>(shift_px) * pitch / distance_m * kArcsecPerRadian;
}

int pixel_shift_for_arcsec(double arcsec, const DisplayProfile& profile, double distance_m) {
  const double pitch = pixel_pitch(profile);
  require_distance(distance_m, "distance");
  if (!(arcsec >= 0.0)) throw Error(ErrorCode::InvalidGeometry, "arcsec must be >= 0");
  return static_cast<int>(round_half_up(arcsec / kArcsecPerRadian * distance_m / pitch));
}

LevelTable build_level_table(const DisplayProfile& profile, double distance_m, int n_levels,
                             double reference_distance_m) {
  pixel_pitch(profile);
  require_distance(distance_m, "distance");
  require_distance(reference_distance_m, "reference distance");
  if (n_levels < 1) throw Error(ErrorCode::InvalidInput, "n_levels must be >= 1");

  LevelTable table;
  table.distance_m = distance_m;
  table.reference_distance_m = reference_distance_m;
  table.levels.reserve(static_cast<std::size_t>(n_levels));
  for (int j = 1; j <= n_levels; ++j) {
    const double arcsec = disparity_arcsec(j, profile, distance_m);
    table.levels.push_back({j, j, arcsec, round_half_up(arcsec)});
  }
  try {
    table.scale_k = distance_scale_k(distance_m, reference_distance_m);
  } catch (const Error&) {
    table.scale_k.reset();
  }
  return table;
}

int distance_scale_k(double distance_m, double reference_m) {
  require_distance(distance_m, "distance");
  require_distance(reference_m, "reference distance");
  const double ratio = distance_m / reference_m;
  const double nearest = std::round(ratio);
  if (nearest < 1.0 || std::abs(ratio - nearest) > kIntegerTolerance) {
    throw Error(ErrorCode::NotIntegerMultiple,
                "distance/reference ratio " + std::to_string(ratio) + " is not an integer");
  }
  return static_cast<int>(nearest);
}

double hd_arcsec(double ipd_m, double delta_z_m, double distance_m) {
  if (!(ipd_m > 0.0)) throw Error(ErrorCode::InvalidGeometry, "ipd must be > 0");
  require_distance(distance_m, "distance");
  return ipd_m * std::abs(delta_z_m) / (distance_m * distance_m) * kArcsecPerRadian;
}

Acuity hd_protocol(const HdMeasurement& measurement, double ol_limit_arcsec) {
  if (measurement.delta_z_m.size() != kHdMeasureCount) {
    throw Error(ErrorCode::ProtocolViolation,
                "expected 6 rod measures, got " + std::to_string(measurement.delta_z_m.size()));
  }
  double sum = 0.0;
  for (double dz : measurement.delta_z_m) {
    sum += hd_arcsec(measurement.ipd_m, dz, measurement.distance_m);
  }
  const double mean = sum / kHdMeasureCount;
  if (mean > ol_limit_arcsec) return Acuity::outside_limits();
  return Acuity::arcsec(mean);
}

int dot_size_px(const DisplayProfile& profile, double distance_m) {
  const double pitch = pixel_pitch(profile);
  require_distance(distance_m, "distance");
  const long px = round_half_up(distance_m * std::tan(arcmin_to_rad(kDotAngleArcmin)) / pitch);
  return static_cast<int>(std::max(1L, px));
}

int stimulus_size_px(const DisplayProfile& profile) {
  validate(profile);
  const double size_m =
      2.0 * kStimulusDesignDistanceM * std::tan(deg_to_rad(kStimulusAngleDeg / 2.0));
  const int px = static_cast<int>(round_half_up(size_m / pixel_pitch(profile)));
  if (px > std::min(profile.width_px, profile.height_px)) {
    throw Error(ErrorCode::StimulusTooLarge,
                "stimulus of " + std::to_string(px) + " px does not fit a " +
                    std::to_string(profile.width_px) + "x" + std::to_string(profile.height_px) +
                    " display");
  }
  return px;
}

}  // namespace stereo
