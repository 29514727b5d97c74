#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "bikefleet/civil_time.hpp"

namespace bikefleet {

using TripId = std::int64_t;
using StationId = std::int64_t;
/// A station id (station mode) or a virtual-station id (dockless mode).
using PlaceId = std::int64_t;

struct GeoPoint {
  double lat = 0.0;
  double lon = 0.0;

  bool valid() const { return lat >= -90.0 && lat <= 90.0 && lon >= -180.0 && lon <= 180.0; }
  bool operator==(const GeoPoint&) const = default;
};

enum class PlaceKind : std::uint8_t { station, coordinate };

/// Either a docking station id or a free-floating coordinate, never both.
class PlaceRef {
 public:
  PlaceRef() = default;

  static PlaceRef station(StationId id) {
    PlaceRef p;
    p.kind_ = PlaceKind::station;
    p.station_id_ = id;
    return p;
  }
  static PlaceRef coordinate(GeoPoint point) {
    PlaceRef p;
    p.kind_ = PlaceKind::coordinate;
    p.point_ = point;
    return p;
  }

  PlaceKind kind() const { return kind_; }
  bool is_station() const { return kind_ == PlaceKind::station; }
  bool is_coordinate() const { return kind_ == PlaceKind::coordinate; }

  StationId station_id() const;
  GeoPoint point() const;

  bool operator==(const PlaceRef& other) const;

 private:
  PlaceKind kind_ = PlaceKind::station;
  StationId station_id_ = 0;
  GeoPoint point_{};
};

std::string to_string(const PlaceRef& place);

struct Trip {
  TripId id = 0;
  PlaceRef origin;
  PlaceRef destination;
  Timestamp start_time = 0;
  Timestamp end_time = 0;
  std::optional<int> company_id;
  std::optional<std::string> bike_id_source;
  std::optional<std::string> user_id_source;

  bool operator==(const Trip&) const = default;
};

/// Total order used everywhere trips are sequenced: (start_time, id).
inline bool trip_order_less(const Trip& a, const Trip& b) {
  return a.start_time != b.start_time ? a.start_time < b.start_time : a.id < b.id;
}

/// Trips sorted by (start_time, id) with an index of contiguous per-day ranges,
/// keyed by the civil date of each trip's start time.
class TripSet {
 public:
  struct Range {
    std::size_t begin = 0;
    std::size_t end = 0;
    bool operator==(const Range&) const = default;
  };

  TripSet() = default;
  explicit TripSet(std::vector<Trip> trips);

  std::span<const Trip> trips() const { return trips_; }
  const Trip& operator[](std::size_t i) const { return trips_[i]; }
  std::size_t size() const { return trips_.size(); }
  bool empty() const { return trips_.empty(); }

  const std::map<CivilDate, Range>& day_index() const { return day_index_; }
  std::span<const Trip> day(CivilDate date) const;

  bool operator==(const TripSet& other) const { return trips_ == other.trips_; }

 private:
  std::vector<Trip> trips_;
  std::map<CivilDate, Range> day_index_;
};

}  // namespace bikefleet
