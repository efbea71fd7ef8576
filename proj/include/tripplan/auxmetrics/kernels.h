#pragma once

#include <cstdint>
#include <span>
#include <string_view>

#include "tripplan/geodata/geo.h"

// Data-parallel inner loop of the auxiliary scoring: squared chord lengths
// between one query point and a batch of candidate points on the unit
// sphere. Every variant performs the same sequence of IEEE operations
// (no fused multiply-add) so results are bit-identical across variants.
namespace tripplan::auxmetrics::kernels {

enum class isa : std::uint8_t { kScalar, kAvx2 };

std::string_view to_str(isa);

bool is_supported(isa);

// Widest supported variant on this host.
isa best_isa();

struct unit_vec {
  double x_{0.0};
  double y_{0.0};
  double z_{0.0};
};

unit_vec to_unit(geodata::latlon const&);

// Squared chord length on the unit sphere corresponding to a great circle
// distance in meters.
double chord2_for_distance(double meters);

// out[i] = (q.x-xs[i])^2 + (q.y-ys[i])^2 + (q.z-zs[i])^2
// All spans must have equal length.
void chord2(isa, unit_vec const& q, std::span<double const> xs,
            std::span<double const> ys, std::span<double const> zs,
            std::span<double> out);

namespace detail {

void chord2_scalar(unit_vec const& q, double const* xs, double const* ys,
                   double const* zs, double* out, std::size_t n);

#if defined(TRIPPLAN_HAS_AVX2_KERNELS)
void chord2_avx2(unit_vec const& q, double const* xs, double const* ys,
                 double const* zs, double* out, std::size_t n);
#endif

}  // namespace detail

}  // namespace tripplan::auxmetrics::kernels
