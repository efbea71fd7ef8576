#include "tripplan/geodata/mode.h"

namespace tripplan::geodata {

std::string_view to_str(mode const m) {
  switch (m) {
    case mode::kWalk: return "walk";
    case mode::kBike: return "bike";
    case mode::kCar: return "car";
    case mode::kPublic: return "public";
    case mode::kTaxi: return "taxi";
  }
  return "?";
}

std::optional<mode> parse_mode(std::string_view const s) {
  for (auto const m : kAllModes) {
    if (to_str(m) == s) {
      return m;
    }
  }
  return std::nullopt;
}

}  // namespace tripplan::geodata
