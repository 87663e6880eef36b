#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace stereo {

/// Four-alternative gap direction. Up points toward the top row of the image.
enum class Orientation : std::uint8_t { Up = 0, Down = 1, Left = 2, Right = 3 };

inline constexpr Orientation kAllOrientations[] = {Orientation::Up, Orientation::Down,
                                                   Orientation::Left, Orientation::Right};

std::string_view to_string(Orientation o) noexcept;
std::optional<Orientation> parse_orientation(std::string_view text) noexcept;

/// A stereo threshold: either a numeric value in seconds of arc or the
/// "outside limits" sentinel. OL is never encoded as a large number.
class Acuity {
 public:
  static Acuity arcsec(double value);
  static Acuity outside_limits() noexcept { return Acuity{}; }

  bool is_outside_limits() const noexcept { return !value_.has_value(); }
  bool is_numeric() const noexcept { return value_.has_value(); }
  /// Throws InvalidInput when called on OL.
  double arcsec() const;
  const std::optional<double>& value() const noexcept { return value_; }

  /// "OL" or the shortest decimal representation of the value.
  std::string to_string() const;
  /// Accepts "OL" (case-insensitive) or a non-negative decimal.
  static Acuity parse(std::string_view text);

  friend bool operator==(const Acuity&, const Acuity&) = default;

 private:
  Acuity() = default;
  explicit Acuity(double v) : value_(v) {}

  std::optional<double> value_;
};

}  // namespace stereo
