#include "tripplan/geodata/geo.h"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace tripplan::geodata {

namespace {
constexpr double to_rad(double const deg) {
  return deg * std::numbers::pi / 180.0;
}
}  // namespace

bool is_valid(latlon const& p) {
  return std::isfinite(p.lat_) && std::isfinite(p.lon_) && p.lat_ >= -90.0 &&
         p.lat_ <= 90.0 && p.lon_ >= -180.0 && p.lon_ <= 180.0;
}

double great_circle_distance(latlon const& a, latlon const& b) {
  auto const lat1 = to_rad(a.lat_);
  auto const lat2 = to_rad(b.lat_);
  auto const dlat = lat2 - lat1;
  auto const dlon = to_rad(b.lon_ - a.lon_);
  auto const s_lat = std::sin(dlat / 2.0);
  auto const s_lon = std::sin(dlon / 2.0);
  auto const h = std::clamp(
      s_lat * s_lat + std::cos(lat1) * std::cos(lat2) * s_lon * s_lon, 0.0,
      1.0);
  return 2.0 * kEarthRadiusM * std::asin(std::sqrt(h));
}

}  // namespace tripplan::geodata
