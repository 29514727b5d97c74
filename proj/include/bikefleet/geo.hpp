#pragma once

#include <cmath>
#include <numbers>

#include "bikefleet/simd/kernels.hpp"
#include "bikefleet/trip.hpp"

namespace bikefleet {

inline constexpr double kEarthRadiusM = 6371008.8;

inline constexpr double deg_to_rad(double deg) { return deg * (std::numbers::pi / 180.0); }
inline constexpr double rad_to_deg(double rad) { return rad * (180.0 / std::numbers::pi); }

/// Great-circle distance in meters.
double haversine_m(GeoPoint a, GeoPoint b);

/// Earth-centred Cartesian position on a sphere of radius kEarthRadiusM.
simd::Query to_cartesian(GeoPoint p);

/// Squared straight-line (chord) distance between two points on the sphere.
double chord2_m2(GeoPoint a, GeoPoint b);

/// Squared chord length that corresponds to a great-circle distance.
double arc_to_chord2(double arc_m);

/// Inverse of arc_to_chord2.
double chord2_to_arc(double chord2_m2);

/// Band of squared chord lengths within which a chord-based comparison with a
/// great-circle radius must be confirmed by haversine. Anything below `lo` is
/// certainly inside the radius, anything above `hi` certainly outside.
struct ChordBand {
  double lo = 0.0;
  double hi = 0.0;
  static ChordBand for_radius(double radius_m);
};

/// Latitude/longitude half-widths (degrees) of a box that contains every point
/// within `radius_m` of `center`. Longitude width is 180 near the poles.
struct DegreeBox {
  double min_lat;
  double max_lat;
  double min_lon;
  double max_lon;
  bool full_lon;
};
DegreeBox covering_box(GeoPoint center, double radius_m);

/// Cartesian coordinates in structure-of-arrays layout, for the SIMD kernels.
struct CartesianSoA {
  std::vector<double> x;
  std::vector<double> y;
  std::vector<double> z;

  void reserve(std::size_t n) {
    x.reserve(n);
    y.reserve(n);
    z.reserve(n);
  }
  void push_back(GeoPoint p) {
    const simd::Query q = to_cartesian(p);
    x.push_back(q.x);
    y.push_back(q.y);
    z.push_back(q.z);
  }
  std::size_t size() const { return x.size(); }
  simd::PointsSoA view() const { return {x.data(), y.data(), z.data(), x.size()}; }
  simd::PointsSoA view(std::size_t begin, std::size_t end) const {
    return {x.data() + begin, y.data() + begin, z.data() + begin, end - begin};
  }
};

}  // namespace bikefleet
