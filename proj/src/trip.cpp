#include "bikefleet/trip.hpp"

#include <algorithm>

#include "bikefleet/error.hpp"

namespace bikefleet {

StationId PlaceRef::station_id() const {
  if (kind_ != PlaceKind::station) throw Error(ErrorKind::precondition, "place is a coordinate, not a station");
  return station_id_;
}

GeoPoint PlaceRef::point() const {
  if (kind_ != PlaceKind::coordinate) throw Error(ErrorKind::precondition, "place is a station, not a coordinate");
  return point_;
}

bool PlaceRef::operator==(const PlaceRef& other) const {
  if (kind_ != other.kind_) return false;
  return kind_ == PlaceKind::station ? station_id_ == other.station_id_ : point_ == other.point_;
}

std::string to_string(const PlaceRef& place) {
  if (place.is_station()) return "station:" + std::to_string(place.station_id());
  const GeoPoint p = place.point();
  return "point:" + std::to_string(p.lat) + "," + std::to_string(p.lon);
}

TripSet::TripSet(std::vector<Trip> trips) : trips_(std::move(trips)) {
  std::sort(trips_.begin(), trips_.end(), trip_order_less);
  for (std::size_t i = 0; i < trips_.size();) {
    const CivilDate d = date_of(trips_[i].start_time);
    std::size_t j = i + 1;
    while (j < trips_.size() && date_of(trips_[j].start_time) == d) ++j;
    day_index_.emplace(d, Range{i, j});
    i = j;
  }
}

std::span<const Trip> TripSet::day(CivilDate date) const {
  const auto it = day_index_.find(date);
  if (it == day_index_.end()) return {};
  return std::span<const Trip>(trips_).subspan(it->second.begin, it->second.end - it->second.begin);
}

}  // namespace bikefleet
