#include "tripplan/auxmetrics/kernels.h"

#include <immintrin.h>

namespace tripplan::auxmetrics::kernels::detail {

void chord2_avx2(unit_vec const& q, double const* xs, double const* ys,
                 double const* zs, double* out, std::size_t const n) {
  auto const qx = _mm256_set1_pd(q.x_);
  auto const qy = _mm256_set1_pd(q.y_);
  auto const qz = _mm256_set1_pd(q.z_);

  auto i = std::size_t{0U};
  for (; i + 4U <= n; i += 4U) {
    auto const dx = _mm256_sub_pd(qx, _mm256_loadu_pd(xs + i));
    auto const dy = _mm256_sub_pd(qy, _mm256_loadu_pd(ys + i));
    auto const dz = _mm256_sub_pd(qz, _mm256_loadu_pd(zs + i));
    auto const xx = _mm256_mul_pd(dx, dx);
    auto const yy = _mm256_mul_pd(dy, dy);
    auto const zz = _mm256_mul_pd(dz, dz);
    _mm256_storeu_pd(out + i, _mm256_add_pd(_mm256_add_pd(xx, yy), zz));
  }

  // tail
  for (; i != n; ++i) {
    auto const dx = q.x_ - xs[i];
    auto const dy = q.y_ - ys[i];
    auto const dz = q.z_ - zs[i];
    out[i] = (dx * dx + dy * dy) + dz * dz;
  }
}

}  // namespace tripplan::auxmetrics::kernels::detail
