#include <algorithm>
#include <limits>
#include <tuple>

#include "bikefleet/error.hpp"
#include "bikefleet/matcher.hpp"

namespace bikefleet {
namespace {

constexpr Timestamp kForever = std::numeric_limits<Timestamp>::max();

struct IdleWindow {
  std::size_t bike;
  std::size_t split;  // index of the first trip after the window
  Timestamp lo;
  Timestamp hi;
  PlaceRef place;
};

/// Windows between consecutive trips and after the last one. The time before
/// a bike's first trip is excluded: swapping there would merge two chains.
std::vector<IdleWindow> idle_windows(const FleetSolution& sol, std::size_t bike) {
  const BikeChain& chain = sol.chains.at(bike);
  const DayTrips& dt = *sol.trips;
  std::vector<IdleWindow> out;
  for (std::size_t k = 1; k <= chain.trip_ids.size(); ++k) {
    const Trip& prev = dt.at(chain.trip_ids[k - 1]);
    const Timestamp hi = k < chain.trip_ids.size() ? dt.at(chain.trip_ids[k]).start_time : kForever;
    const Timestamp lo = prev.end_time + sol.config.usage_interval_s;
    if (lo <= hi) out.push_back({bike, k, lo, hi, prev.destination});
  }
  return out;
}

std::optional<std::size_t> split_at(const FleetSolution& sol, std::size_t bike, const PlaceRef& place, Timestamp t) {
  for (const IdleWindow& w : idle_windows(sol, bike)) {
    if (w.lo <= t && t <= w.hi && w.place == place) return w.split;
  }
  return std::nullopt;
}

auto place_key(const PlaceRef& p) {
  if (p.is_station()) return std::tuple<int, double, double>{0, static_cast<double>(p.station_id()), 0.0};
  return std::tuple<int, double, double>{1, p.point().lat, p.point().lon};
}

}  // namespace

void normalize_chains(FleetSolution& sol) {
  const DayTrips& dt = *sol.trips;
  std::erase_if(sol.chains, [](const BikeChain& c) { return c.trip_ids.empty(); });
  std::sort(sol.chains.begin(), sol.chains.end(), [&](const BikeChain& a, const BikeChain& b) {
    return trip_order_less(dt.at(a.trip_ids.front()), dt.at(b.trip_ids.front()));
  });
  sol.assignment_by_position.assign(dt.size(), 0);
  for (std::size_t b = 0; b < sol.chains.size(); ++b) {
    BikeChain& c = sol.chains[b];
    c.bike_ord = b;
    const Trip& first = dt.at(c.trip_ids.front());
    const Trip& last = dt.at(c.trip_ids.back());
    c.initial_place = first.origin;
    c.final_place = last.destination;
    c.current_pos = last.destination;
    c.available_from = last.end_time;
    for (TripId id : c.trip_ids) sol.assignment_by_position[dt.position(id)] = b;
  }
}

FleetSolution apply_break_reconnect(const FleetSolution& sol, std::size_t bike_a, std::size_t bike_b,
                                    const PlaceRef& place, Timestamp time) {
  if (bike_a >= sol.chains.size() || bike_b >= sol.chains.size() || bike_a == bike_b) {
    throw Error(ErrorKind::precondition, "break-reconnect needs two distinct existing bikes");
  }
  const auto ka = split_at(sol, bike_a, place, time);
  const auto kb = split_at(sol, bike_b, place, time);
  if (!ka || !kb) {
    throw Error(ErrorKind::precondition, "bikes " + std::to_string(bike_a) + " and " + std::to_string(bike_b) +
                                             " are not idle together at " + to_string(place) + " at " +
                                             format_timestamp(time));
  }
  FleetSolution out = sol;
  std::vector<TripId>& a = out.chains[bike_a].trip_ids;
  std::vector<TripId>& b = out.chains[bike_b].trip_ids;
  std::vector<TripId> tail_a(a.begin() + static_cast<std::ptrdiff_t>(*ka), a.end());
  a.resize(*ka);
  a.insert(a.end(), b.begin() + static_cast<std::ptrdiff_t>(*kb), b.end());
  b.resize(*kb);
  b.insert(b.end(), tail_a.begin(), tail_a.end());
  normalize_chains(out);
  if (const auto problems = validate_solution(out); !problems.empty()) {
    throw Error(ErrorKind::precondition, "break-reconnect would produce an invalid chain: " + problems.front());
  }
  return out;
}

std::vector<Intersection> find_intersections(const FleetSolution& sol, std::size_t limit) {
  std::vector<IdleWindow> all;
  for (std::size_t b = 0; b < sol.chains.size(); ++b) {
    auto w = idle_windows(sol, b);
    all.insert(all.end(), w.begin(), w.end());
  }
  std::sort(all.begin(), all.end(), [](const IdleWindow& x, const IdleWindow& y) {
    return std::tuple(place_key(x.place), x.lo, x.bike) < std::tuple(place_key(y.place), y.lo, y.bike);
  });
  std::vector<Intersection> out;
  for (std::size_t i = 0; i < all.size() && out.size() < limit; ++i) {
    for (std::size_t j = i + 1; j < all.size() && out.size() < limit; ++j) {
      if (!(all[j].place == all[i].place) || all[j].lo > all[i].hi) break;
      if (all[j].bike == all[i].bike) continue;
      out.push_back({all[i].bike, all[j].bike, all[i].place, all[j].lo});
    }
  }
  return out;
}

}  // namespace bikefleet
