#include "stereotest/types.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>

#include "stereotest/error.hpp"

namespace stereo {

std::string_view to_string(Orientation o) noexcept {
  switch (o) {
    case Orientation::Up: return "up";
    case Orientation::Down: return "down";
    case Orientation::Left: return "left";
    case Orientation::Right: return "right";
  }
  return "up";
}

std::optional<Orientation> parse_orientation(std::string_view text) noexcept {
  std::string lower(text);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  for (Orientation o : kAllOrientations) {
    if (lower == to_string(o)) return o;
  }
  return std::nullopt;
}

Acuity Acuity::arcsec(double value) {
  if (!std::isfinite(value) || value < 0.0) {
    throw Error(ErrorCode::InvalidInput, "acuity must be a finite non-negative arcsec value");
  }
  return Acuity{value};
}

double Acuity::arcsec() const {
  if (!value_) throw Error(ErrorCode::InvalidInput, "acuity is outside limits (OL)");
  return *value_;
}

std::string Acuity::to_string() const {
  if (!value_) return "OL";
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, *value_);
  return std::string(buf, ptr);
}

Acuity Acuity::parse(std::string_view text) {
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
  if (text.size() == 2 && std::toupper(static_cast<unsigned char>(text[0])) == 'O' &&
      std::toupper(static_cast<unsigned char>(text[1])) == 'L') {
    return outside_limits();
  }
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty()) {
    throw Error(ErrorCode::InvalidInput, "not an arcsec value or OL: '" + std::string(text) + "'");
  }
  return arcsec(v);
}

}  // namespace stereo
