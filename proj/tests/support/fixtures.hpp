#pragma once

#include <vector>

#include "bikefleet/civil_time.hpp"
#include "bikefleet/geo.hpp"
#include "bikefleet/rng.hpp"
#include "bikefleet/trip.hpp"

namespace fixtures {

using namespace bikefleet;

inline const CivilDate kDay = CivilDate::from_ymd(2020, 3, 2);

inline Timestamp at(int h, int m, int s = 0) { return kDay.midnight() + h * 3600 + m * 60 + s; }

inline Trip station_trip(TripId id, StationId from, Timestamp start, StationId to, Timestamp end) {
  Trip t;
  t.id = id;
  t.origin = PlaceRef::station(from);
  t.destination = PlaceRef::station(to);
  t.start_time = start;
  t.end_time = end;
  return t;
}

inline Trip dockless_trip(TripId id, GeoPoint from, Timestamp start, GeoPoint to, Timestamp end) {
  Trip t;
  t.id = id;
  t.origin = PlaceRef::coordinate(from);
  t.destination = PlaceRef::coordinate(to);
  t.start_time = start;
  t.end_time = end;
  return t;
}

/// Point at a bearing-free offset of (north_m, east_m) from `p`.
inline GeoPoint offset(GeoPoint p, double north_m, double east_m) {
  const double m_per_deg = deg_to_rad(1.0) * kEarthRadiusM;
  return {p.lat + north_m / m_per_deg, p.lon + east_m / (m_per_deg * std::cos(deg_to_rad(p.lat)))};
}

inline const GeoPoint kCenter{32.05, 118.78};

/// Start times on a 5-minute grid so equal starts occur; ids are shuffled
/// relative to start order.
inline TripSet random_station_day(Rng& rng, std::size_t n, std::size_t stations, CivilDate day = kDay) {
  std::vector<Trip> trips;
  for (std::size_t i = 0; i < n; ++i) {
    const Timestamp start = day.midnight() + 6 * 3600 + static_cast<Timestamp>(rng.below(16 * 12)) * 300;
    const Timestamp dur = 120 + static_cast<Timestamp>(rng.below(45 * 60));
    trips.push_back(station_trip(static_cast<TripId>(i), static_cast<StationId>(rng.below(stations)), start,
                                 static_cast<StationId>(rng.below(stations)), start + dur));
  }
  for (std::size_t i = n; i > 1; --i) std::swap(trips[i - 1].id, trips[rng.below(i)].id);
  return TripSet(std::move(trips));
}

/// Endpoints scattered over a square of side `extent_m` around kCenter. With
/// `anchors` > 0 endpoints are drawn from that many fixed spots, so bikes can
/// meet at identical coordinates.
inline TripSet random_dockless_day(Rng& rng, std::size_t n, double extent_m, CivilDate day = kDay,
                                   std::size_t anchors = 0) {
  auto scatter = [&] { return offset(kCenter, rng.uniform(-0.5, 0.5) * extent_m, rng.uniform(-0.5, 0.5) * extent_m); };
  std::vector<GeoPoint> spots;
  for (std::size_t i = 0; i < anchors; ++i) spots.push_back(scatter());
  auto point = [&] { return spots.empty() ? scatter() : spots[rng.below(spots.size())]; };
  std::vector<Trip> trips;
  for (std::size_t i = 0; i < n; ++i) {
    const Timestamp start = day.midnight() + 6 * 3600 + static_cast<Timestamp>(rng.below(16 * 12)) * 300;
    const Timestamp dur = 120 + static_cast<Timestamp>(rng.below(45 * 60));
    trips.push_back(dockless_trip(static_cast<TripId>(i), point(), start, point(), start + dur));
  }
  for (std::size_t i = n; i > 1; --i) std::swap(trips[i - 1].id, trips[rng.below(i)].id);
  return TripSet(std::move(trips));
}

inline std::vector<GeoPoint> blob(Rng& rng, GeoPoint c, std::size_t n, double radius_m) {
  std::vector<GeoPoint> out;
  for (std::size_t i = 0; i < n; ++i) {
    out.push_back(offset(c, rng.uniform(-radius_m, radius_m), rng.uniform(-radius_m, radius_m)));
  }
  return out;
}

}  // namespace fixtures
