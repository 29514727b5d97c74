#include "bikefleet/geo.hpp"

#include <algorithm>

namespace bikefleet {

double haversine_m(GeoPoint a, GeoPoint b) {
  const double phi1 = deg_to_rad(a.lat);
  const double phi2 = deg_to_rad(b.lat);
  const double sdphi = std::sin((phi2 - phi1) * 0.5);
  const double sdlam = std::sin(deg_to_rad(b.lon - a.lon) * 0.5);
  const double h = sdphi * sdphi + std::cos(phi1) * std::cos(phi2) * sdlam * sdlam;
  return 2.0 * kEarthRadiusM * std::asin(std::min(1.0, std::sqrt(h)));
}

simd::Query to_cartesian(GeoPoint p) {
  const double phi = deg_to_rad(p.lat);
  const double lam = deg_to_rad(p.lon);
  const double c = std::cos(phi);
  return {kEarthRadiusM * c * std::cos(lam), kEarthRadiusM * c * std::sin(lam), kEarthRadiusM * std::sin(phi)};
}

double chord2_m2(GeoPoint a, GeoPoint b) {
  const simd::Query p = to_cartesian(a);
  const simd::Query q = to_cartesian(b);
  const double dx = p.x - q.x;
  const double dy = p.y - q.y;
  const double dz = p.z - q.z;
  return dx * dx + dy * dy + dz * dz;
}

double arc_to_chord2(double arc_m) {
  const double c = 2.0 * kEarthRadiusM * std::sin(std::min(arc_m, std::numbers::pi * kEarthRadiusM) /
                                                  (2.0 * kEarthRadiusM));
  return c * c;
}

double chord2_to_arc(double chord2_m2) {
  const double half = std::sqrt(std::max(0.0, chord2_m2)) / (2.0 * kEarthRadiusM);
  return 2.0 * kEarthRadiusM * std::asin(std::min(1.0, half));
}

ChordBand ChordBand::for_radius(double radius_m) {
  const double c2 = arc_to_chord2(radius_m);
  // Cartesian coordinates carry ~1e-9 m absolute error; the relative term covers
  // disagreement between the chord and haversine evaluations.
  const double slack = c2 * 1e-9 + 1e-6;
  return {std::max(0.0, c2 - slack), c2 + slack};
}

DegreeBox covering_box(GeoPoint center, double radius_m) {
  const double ang = radius_m / kEarthRadiusM;
  const double dlat = rad_to_deg(ang) * (1.0 + 1e-9) + 1e-12;
  DegreeBox box{center.lat - dlat, center.lat + dlat, 0.0, 0.0, false};
  const double phi_max = deg_to_rad(std::max(std::abs(box.min_lat), std::abs(box.max_lat)));
  if (ang >= std::numbers::pi / 2 || phi_max >= std::numbers::pi / 2 - 1e-9) {
    box.full_lon = true;
  } else {
    const double s = std::sin(ang) / std::cos(phi_max);
    if (s >= 1.0) {
      box.full_lon = true;
    } else {
      const double dlon = rad_to_deg(std::asin(s)) * (1.0 + 1e-9) + 1e-12;
      box.min_lon = center.lon - dlon;
      box.max_lon = center.lon + dlon;
      // No antimeridian wrap-around: a box crossing +-180 degrades to a full band.
      if (dlon >= 180.0 || box.min_lon < -180.0 || box.max_lon > 180.0) box.full_lon = true;
    }
  }
  if (box.full_lon) {
    box.min_lon = -180.0;
    box.max_lon = 180.0;
  }
  return box;
}

}  // namespace bikefleet
