#include "tripplan/auxmetrics/kernels.h"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace tripplan::auxmetrics::kernels {

std::string_view to_str(isa const i) {
  switch (i) {
    case isa::kScalar: return "scalar";
    case isa::kAvx2: return "avx2";
  }
  return "?";
}

bool is_supported(isa const i) {
  switch (i) {
    case isa::kScalar: return true;
    case isa::kAvx2:
#if defined(TRIPPLAN_HAS_AVX2_KERNELS)
      return __builtin_cpu_supports("avx2") != 0;
#else
      return false;
#endif
  }
  return false;
}

isa best_isa() {
  static auto const best = is_supported(isa::kAvx2) ? isa::kAvx2 : isa::kScalar;
  return best;
}

unit_vec to_unit(geodata::latlon const& p) {
  auto const lat = p.lat_ * std::numbers::pi / 180.0;
  auto const lon = p.lon_ * std::numbers::pi / 180.0;
  return {std::cos(lat) * std::cos(lon), std::cos(lat) * std::sin(lon),
          std::sin(lat)};
}

double chord2_for_distance(double const meters) {
  auto const half_angle =
      std::min(meters / (2.0 * geodata::kEarthRadiusM), std::numbers::pi / 2.0);
  auto const chord = 2.0 * std::sin(half_angle);
  return chord * chord;
}

void chord2(isa const i, unit_vec const& q, std::span<double const> xs,
            std::span<double const> ys, std::span<double const> zs,
            std::span<double> out) {
  assert(xs.size() == ys.size() && ys.size() == zs.size() &&
         zs.size() == out.size());
  switch (i) {
    case isa::kScalar:
      detail::chord2_scalar(q, xs.data(), ys.data(), zs.data(), out.data(),
                            out.size());
      return;
    case isa::kAvx2:
#if defined(TRIPPLAN_HAS_AVX2_KERNELS)
      detail::chord2_avx2(q, xs.data(), ys.data(), zs.data(), out.data(),
                          out.size());
      return;
#else
      break;
#endif
  }
  throw std::invalid_argument{"kernel variant not available"};
}

}  // namespace tripplan::auxmetrics::kernels
