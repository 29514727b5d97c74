#include <immintrin.h>

#include "bikefleet/simd/kernels.hpp"

namespace bikefleet::simd::detail {
namespace {

inline __m256d chord2_lane(__m256d qx, __m256d qy, __m256d qz, const double* x, const double* y,
                           const double* z) {
  const __m256d dx = _mm256_sub_pd(qx, _mm256_loadu_pd(x));
  const __m256d dy = _mm256_sub_pd(qy, _mm256_loadu_pd(y));
  const __m256d dz = _mm256_sub_pd(qz, _mm256_loadu_pd(z));
  // Same association as the scalar kernel: (dx*dx + dy*dy) + dz*dz.
  return _mm256_add_pd(_mm256_add_pd(_mm256_mul_pd(dx, dx), _mm256_mul_pd(dy, dy)), _mm256_mul_pd(dz, dz));
}

}  // namespace

void chord2_avx2(Query q, PointsSoA pts, double* out) {
  const __m256d qx = _mm256_set1_pd(q.x);
  const __m256d qy = _mm256_set1_pd(q.y);
  const __m256d qz = _mm256_set1_pd(q.z);
  std::size_t i = 0;
  for (; i + 4 <= pts.n; i += 4) {
    _mm256_storeu_pd(out + i, chord2_lane(qx, qy, qz, pts.x + i, pts.y + i, pts.z + i));
  }
  PointsSoA tail{pts.x + i, pts.y + i, pts.z + i, pts.n - i};
  chord2_scalar(q, tail, out + i);
}

void min_update_avx2(Query q, PointsSoA pts, double* inout) {
  const __m256d qx = _mm256_set1_pd(q.x);
  const __m256d qy = _mm256_set1_pd(q.y);
  const __m256d qz = _mm256_set1_pd(q.z);
  std::size_t i = 0;
  for (; i + 4 <= pts.n; i += 4) {
    const __m256d d = chord2_lane(qx, qy, qz, pts.x + i, pts.y + i, pts.z + i);
    const __m256d cur = _mm256_loadu_pd(inout + i);
    // Keep `cur` unless d < cur, matching the scalar comparison exactly.
    const __m256d lt = _mm256_cmp_pd(d, cur, _CMP_LT_OQ);
    _mm256_storeu_pd(inout + i, _mm256_blendv_pd(cur, d, lt));
  }
  PointsSoA tail{pts.x + i, pts.y + i, pts.z + i, pts.n - i};
  min_update_scalar(q, tail, inout + i);
}

Top2 argmin2_avx2(Query q, PointsSoA pts) {
  const __m256d qx = _mm256_set1_pd(q.x);
  const __m256d qy = _mm256_set1_pd(q.y);
  const __m256d qz = _mm256_set1_pd(q.z);
  const double inf = std::numeric_limits<double>::infinity();
  __m256d best = _mm256_set1_pd(inf);
  __m256d second = _mm256_set1_pd(inf);
  // Lane indices are carried as doubles; exact for any n below 2^53.
  __m256d best_idx = _mm256_set1_pd(-1.0);
  __m256d idx = _mm256_setr_pd(0.0, 1.0, 2.0, 3.0);
  const __m256d step = _mm256_set1_pd(4.0);

  std::size_t i = 0;
  for (; i + 4 <= pts.n; i += 4) {
    const __m256d d = chord2_lane(qx, qy, qz, pts.x + i, pts.y + i, pts.z + i);
    const __m256d lt_best = _mm256_cmp_pd(d, best, _CMP_LT_OQ);
    const __m256d lt_second = _mm256_cmp_pd(d, second, _CMP_LT_OQ);
    second = _mm256_blendv_pd(_mm256_blendv_pd(second, d, lt_second), best, lt_best);
    best = _mm256_blendv_pd(best, d, lt_best);
    best_idx = _mm256_blendv_pd(best_idx, idx, lt_best);
    idx = _mm256_add_pd(idx, step);
  }

  alignas(32) double lane_best[4];
  alignas(32) double lane_second[4];
  alignas(32) double lane_idx[4];
  _mm256_store_pd(lane_best, best);
  _mm256_store_pd(lane_second, second);
  _mm256_store_pd(lane_idx, best_idx);

  Top2 r;
  for (int l = 0; l < 4; ++l) {
    if (lane_idx[l] < 0) continue;
    const auto li = static_cast<std::size_t>(lane_idx[l]);
    if (lane_best[l] < r.best || (lane_best[l] == r.best && li < r.index)) {
      r.second = r.best;
      r.best = lane_best[l];
      r.index = li;
    } else if (lane_best[l] < r.second) {
      r.second = lane_best[l];
    }
    if (lane_second[l] < r.second) r.second = lane_second[l];
  }
  for (; i < pts.n; ++i) {
    const double dx = q.x - pts.x[i];
    const double dy = q.y - pts.y[i];
    const double dz = q.z - pts.z[i];
    const double d = dx * dx + dy * dy + dz * dz;
    if (d < r.best) {
      r.second = r.best;
      r.best = d;
      r.index = i;
    } else if (d < r.second) {
      r.second = d;
    }
  }
  return r;
}

}  // namespace bikefleet::simd::detail
