#include "tripplan/auxmetrics/kernels.h"

namespace tripplan::auxmetrics::kernels::detail {

void chord2_scalar(unit_vec const& q, double const* xs, double const* ys,
                   double const* zs, double* out, std::size_t const n) {
  for (auto i = std::size_t{0U}; i != n; ++i) {
    auto const dx = q.x_ - xs[i];
    auto const dy = q.y_ - ys[i];
    auto const dz = q.z_ - zs[i];
    auto const xx = dx * dx;
    auto const yy = dy * dy;
    auto const zz = dz * dz;
    out[i] = (xx + yy) + zz;
  }
}

}  // namespace tripplan::auxmetrics::kernels::detail
