#pragma once

// Distance kernels over points stored as Earth-centred Cartesian coordinates
// in meters (structure-of-arrays). Squared chord length is monotone in the
// great-circle distance, so nearest-point and radius decisions can be made on
// it without trigonometry; callers confirm borderline cases with haversine.
//
// Every ISA variant must produce bit-identical results to the scalar reference.

#include <cstddef>
#include <limits>

namespace bikefleet::simd {

struct Query {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
};

struct PointsSoA {
  const double* x = nullptr;
  const double* y = nullptr;
  const double* z = nullptr;
  std::size_t n = 0;
};

/// Smallest and second-smallest squared chord. `index` is the lowest index that
/// attains `best`; `second` is the minimum over every other index, so it equals
/// `best` on an exact tie. For n == 0, index == npos and both values are +inf.
struct Top2 {
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);
  std::size_t index = npos;
  double best = std::numeric_limits<double>::infinity();
  double second = std::numeric_limits<double>::infinity();
};

struct KernelTable {
  const char* name;
  /// out[i] = |q - p_i|^2
  void (*chord2)(Query q, PointsSoA pts, double* out);
  /// inout[i] = min(inout[i], |q - p_i|^2)
  void (*min_update)(Query q, PointsSoA pts, double* inout);
  Top2 (*argmin2)(Query q, PointsSoA pts);
};

const KernelTable& scalar_kernels();

/// nullptr when the binary was built without AVX2 support or the CPU lacks it.
const KernelTable* avx2_kernels();

/// The table selected at first use: AVX2 when available, unless the
/// environment variable BIKEFLEET_SIMD is set to "scalar".
const KernelTable& active_kernels();

namespace detail {
void chord2_scalar(Query q, PointsSoA pts, double* out);
void min_update_scalar(Query q, PointsSoA pts, double* inout);
Top2 argmin2_scalar(Query q, PointsSoA pts);
#if defined(BIKEFLEET_HAVE_AVX2)
void chord2_avx2(Query q, PointsSoA pts, double* out);
void min_update_avx2(Query q, PointsSoA pts, double* inout);
Top2 argmin2_avx2(Query q, PointsSoA pts);
#endif
}  // namespace detail

}  // namespace bikefleet::simd
