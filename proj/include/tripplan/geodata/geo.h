#pragma once

namespace tripplan::geodata {

constexpr auto const kEarthRadiusM = 6'371'000.0;

struct latlon {
  friend bool operator==(latlon const&, latlon const&) = default;
  double lat_{0.0};
  double lon_{0.0};
};

bool is_valid(latlon const&);

// Haversine distance in meters.
double great_circle_distance(latlon const& a, latlon const& b);

}  // namespace tripplan::geodata
