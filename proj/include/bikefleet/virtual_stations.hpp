#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "bikefleet/geo.hpp"
#include "bikefleet/grid_index.hpp"
#include "bikefleet/trip.hpp"

namespace bikefleet {

inline constexpr double kServiceRadiusM = 250.0;

/// Parameters of the noise-removing k-means station identification, echoed
/// into every exported station file.
struct ClusteringParams {
  double eps_m = 250.0;
  std::size_t min_pts = 5;
  std::optional<std::size_t> k;      // fixed cluster count
  std::vector<std::size_t> k_grid;   // elbow search when k is unset
  double service_radius_m = kServiceRadiusM;
  std::uint64_t seed = 0;

  // Filled in by identify_virtual_stations.
  std::optional<CivilDate> source_day;
  std::size_t origins = 0;
  std::size_t noise_points = 0;
  std::size_t k_used = 0;
};

struct VirtualStation {
  PlaceId vs_id = 0;
  GeoPoint center;
  double service_radius_m = kServiceRadiusM;
};

struct PlaceAssignment {
  PlaceId vs_id = 0;
  double distance_m = 0.0;
  bool in_service_area = false;
};

class VirtualStationSet {
 public:
  VirtualStationSet() = default;
  /// Ids are reassigned 0..n-1 in the given order. Throws Error(precondition)
  /// when two centers coincide.
  VirtualStationSet(std::vector<GeoPoint> centers, double service_radius_m, ClusteringParams params);

  const std::vector<VirtualStation>& stations() const { return stations_; }
  std::size_t size() const { return stations_.size(); }
  bool empty() const { return stations_.empty(); }
  const ClusteringParams& params() const { return params_; }
  const GridIndex& index() const { return index_; }
  const CartesianSoA& cartesian() const { return cart_; }

  /// JSON with vs_id, lat, lon, radius per station and the parameters.
  std::string to_json() const;
  /// vs_id,lat,lon,radius_m
  std::string to_csv() const;
  static VirtualStationSet from_json(const std::string& text);

 private:
  std::vector<VirtualStation> stations_;
  GridIndex index_;
  CartesianSoA cart_;
  ClusteringParams params_;
};

/// Nearest virtual station by haversine, ties to the lowest vs_id; the point is
/// in the service area when strictly closer than the station's radius.
/// Throws Error(precondition) for an empty set.
PlaceAssignment assign_place(GeoPoint p, const VirtualStationSet& stations);

/// Busiest day of `history` (earliest on ties) -> DBSCAN over its trip origins
/// -> drop noise -> k-means (fixed k, or elbow over k_grid) -> centers.
/// Throws Error(precondition) for empty history, non-coordinate trips, or when
/// every origin is noise.
VirtualStationSet identify_virtual_stations(const std::map<CivilDate, TripSet>& history, ClusteringParams params);

VirtualStationSet load_virtual_stations_file(const std::string& path);

}  // namespace bikefleet
