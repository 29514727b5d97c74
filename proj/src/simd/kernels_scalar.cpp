#include "bikefleet/simd/kernels.hpp"

namespace bikefleet::simd::detail {

void chord2_scalar(Query q, PointsSoA pts, double* out) {
  for (std::size_t i = 0; i < pts.n; ++i) {
    const double dx = q.x - pts.x[i];
    const double dy = q.y - pts.y[i];
    const double dz = q.z - pts.z[i];
    out[i] = dx * dx + dy * dy + dz * dz;
  }
}

void min_update_scalar(Query q, PointsSoA pts, double* inout) {
  for (std::size_t i = 0; i < pts.n; ++i) {
    const double dx = q.x - pts.x[i];
    const double dy = q.y - pts.y[i];
    const double dz = q.z - pts.z[i];
    const double d = dx * dx + dy * dy + dz * dz;
    if (d < inout[i]) inout[i] = d;
  }
}

Top2 argmin2_scalar(Query q, PointsSoA pts) {
  Top2 r;
  for (std::size_t i = 0; i < pts.n; ++i) {
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
