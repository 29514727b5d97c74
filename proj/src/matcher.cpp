#include "bikefleet/matcher.hpp"

#include <algorithm>
#include <limits>

#include "bikefleet/error.hpp"
#include "bikefleet/geo.hpp"
#include "bikefleet/grid_index.hpp"

namespace bikefleet {
namespace {

constexpr std::uint32_t kNone = std::numeric_limits<std::uint32_t>::max();

/// Smallest not-yet-removed slot at or after i. Every segment ends with a
/// sentinel slot that is never removed.
class NextAlive {
 public:
  explicit NextAlive(std::size_t n) : next_(n) {
    for (std::size_t i = 0; i < n; ++i) next_[i] = static_cast<std::uint32_t>(i);
  }
  std::uint32_t find(std::uint32_t i) {
    std::uint32_t root = i;
    while (next_[root] != root) root = next_[root];
    while (next_[i] != root) {
      const std::uint32_t up = next_[i];
      next_[i] = root;
      i = up;
    }
    return root;
  }
  void remove(std::uint32_t i) { next_[i] = i + 1; }

 private:
  std::vector<std::uint32_t> next_;
};

void check_modes(const TripSet& trips, const MatchConfig& cfg) {
  const PlaceKind want = cfg.mode == MatchMode::station ? PlaceKind::station : PlaceKind::coordinate;
  for (const Trip& t : trips.trips()) {
    if (t.origin.kind() != want || t.destination.kind() != want) {
      throw Error(ErrorKind::precondition, std::string("trip ") + std::to_string(t.id) +
                                               " has places that do not match " + to_string(cfg.mode) + " mode");
    }
  }
  if (trips.day_index().size() > 1) {
    throw Error(ErrorKind::precondition, "min-fleet matching runs on a single day of trips");
  }
}

FleetSolution make_solution(const TripSet& day_trips, const MatchConfig& cfg,
                            const std::vector<std::vector<std::uint32_t>>& chains_by_pos) {
  FleetSolution sol;
  sol.config = cfg;
  sol.trips = std::make_shared<const DayTrips>(day_trips);
  sol.day = day_trips.empty() ? CivilDate{} : date_of(day_trips[0].start_time);
  const TripSet& ts = sol.trips->trips();
  sol.assignment_by_position.assign(ts.size(), 0);
  sol.chains.reserve(chains_by_pos.size());
  for (std::size_t b = 0; b < chains_by_pos.size(); ++b) {
    BikeChain c;
    c.bike_ord = b;
    c.trip_ids.reserve(chains_by_pos[b].size());
    for (std::uint32_t pos : chains_by_pos[b]) {
      c.trip_ids.push_back(ts[pos].id);
      sol.assignment_by_position[pos] = b;
    }
    const Trip& first = ts[chains_by_pos[b].front()];
    const Trip& last = ts[chains_by_pos[b].back()];
    c.initial_place = first.origin;
    c.final_place = last.destination;
    c.available_from = last.end_time;
    c.current_pos = last.destination;
    sol.chains.push_back(std::move(c));
  }
  return sol;
}

std::vector<std::vector<std::uint32_t>> greedy_station(std::span<const Trip> trips, Timestamp c) {
  const std::size_t n = trips.size();
  std::vector<StationId> stations;
  stations.reserve(n);
  for (const Trip& t : trips) stations.push_back(t.origin.station_id());
  std::sort(stations.begin(), stations.end());
  stations.erase(std::unique(stations.begin(), stations.end()), stations.end());
  auto dense = [&](StationId s) -> std::int64_t {
    const auto it = std::lower_bound(stations.begin(), stations.end(), s);
    return it != stations.end() && *it == s ? it - stations.begin() : -1;
  };

  // Per-station segments of trip positions (ascending), each closed by a sentinel.
  std::vector<std::uint32_t> seg_begin(stations.size() + 1, 0);
  std::vector<std::uint32_t> origin_station(n);
  for (std::size_t i = 0; i < n; ++i) {
    origin_station[i] = static_cast<std::uint32_t>(dense(trips[i].origin.station_id()));
    ++seg_begin[origin_station[i] + 1];
  }
  for (std::size_t s = 0; s < stations.size(); ++s) seg_begin[s + 1] += seg_begin[s] + 1;
  std::vector<std::uint32_t> slot_pos(n + stations.size(), kNone);
  std::vector<Timestamp> slot_start(n + stations.size(), std::numeric_limits<Timestamp>::max());
  std::vector<std::uint32_t> slot_of(n);
  {
    std::vector<std::uint32_t> fill(seg_begin.begin(), seg_begin.end() - 1);
    for (std::size_t i = 0; i < n; ++i) {
      const std::uint32_t slot = fill[origin_station[i]]++;
      slot_pos[slot] = static_cast<std::uint32_t>(i);
      slot_start[slot] = trips[i].start_time;
      slot_of[i] = slot;
    }
  }

  NextAlive global(n + 1);
  NextAlive slots(slot_pos.size());
  std::vector<std::vector<std::uint32_t>> chains;
  std::uint32_t cursor = 0;
  while (true) {
    const std::uint32_t first = global.find(cursor);
    if (first >= n) break;
    cursor = first;
    std::vector<std::uint32_t> chain{first};
    global.remove(first);
    slots.remove(slot_of[first]);
    std::uint32_t cur = first;
    while (true) {
      const std::int64_t s = dense(trips[cur].destination.station_id());
      if (s < 0) break;
      const std::uint32_t b = seg_begin[s];
      const std::uint32_t e = seg_begin[s + 1] - 1;  // sentinel slot
      const Timestamp ready = trips[cur].end_time + c;
      const auto by_time = std::lower_bound(slot_start.begin() + b, slot_start.begin() + e, ready);
      const auto by_order = std::upper_bound(slot_pos.begin() + b, slot_pos.begin() + e, cur);
      const auto from = static_cast<std::uint32_t>(
          std::max(by_time - slot_start.begin(), by_order - slot_pos.begin()));
      const std::uint32_t slot = slots.find(from);
      if (slot >= e) break;
      const std::uint32_t next = slot_pos[slot];
      slots.remove(slot);
      global.remove(next);
      chain.push_back(next);
      cur = next;
    }
    chains.push_back(std::move(chain));
  }
  return chains;
}

std::vector<std::vector<std::uint32_t>> greedy_dockless(std::span<const Trip> trips, double w, Timestamp c) {
  const std::size_t n = trips.size();
  std::vector<GeoPoint> origins(n), dests(n);
  GeoPoint sw{90.0, 180.0};
  for (std::size_t i = 0; i < n; ++i) {
    origins[i] = trips[i].origin.point();
    dests[i] = trips[i].destination.point();
    sw.lat = std::min(sw.lat, origins[i].lat);
    sw.lon = std::min(sw.lon, origins[i].lon);
  }
  const CellGeometry geom(n ? sw : GeoPoint{}, w);

  // Origins grouped by cell, positions ascending within a cell, one sentinel per cell.
  std::vector<CellKey> cell(n);
  std::vector<std::uint32_t> order(n);
  for (std::size_t i = 0; i < n; ++i) {
    cell[i] = geom.cell_of(origins[i]);
    order[i] = static_cast<std::uint32_t>(i);
  }
  std::stable_sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) { return cell[a] < cell[b]; });
  std::vector<CellKey> keys;
  std::vector<std::uint32_t> seg_begin;
  std::vector<std::uint32_t> slot_pos;
  std::vector<Timestamp> slot_start;
  CartesianSoA slot_xyz;
  std::vector<std::uint32_t> slot_of(n);
  slot_pos.reserve(n + 1024);
  for (std::size_t k = 0; k < n; ++k) {
    const std::uint32_t pos = order[k];
    if (k == 0 || cell[pos] != cell[order[k - 1]]) {
      if (k != 0) {
        slot_pos.push_back(kNone);
        slot_start.push_back(std::numeric_limits<Timestamp>::max());
        slot_xyz.push_back(GeoPoint{});
      }
      keys.push_back(cell[pos]);
      seg_begin.push_back(static_cast<std::uint32_t>(slot_pos.size()));
    }
    slot_of[pos] = static_cast<std::uint32_t>(slot_pos.size());
    slot_pos.push_back(pos);
    slot_start.push_back(trips[pos].start_time);
    slot_xyz.push_back(origins[pos]);
  }
  if (n > 0) {
    slot_pos.push_back(kNone);
    slot_start.push_back(std::numeric_limits<Timestamp>::max());
    slot_xyz.push_back(GeoPoint{});
  }
  seg_begin.push_back(static_cast<std::uint32_t>(slot_pos.size()));

  const ChordBand band = ChordBand::for_radius(w);
  NextAlive global(n + 1);
  NextAlive slots(slot_pos.size());
  std::vector<std::vector<std::uint32_t>> chains;

  struct Best {
    Timestamp start;
    double dist;
    std::uint32_t pos;
  };

  std::uint32_t cursor = 0;
  while (true) {
    const std::uint32_t first = global.find(cursor);
    if (first >= n) break;
    cursor = first;
    std::vector<std::uint32_t> chain{first};
    global.remove(first);
    slots.remove(slot_of[first]);
    std::uint32_t cur = first;
    while (true) {
      const GeoPoint here = dests[cur];
      const simd::Query q = to_cartesian(here);
      const Timestamp ready = trips[cur].end_time + c;
      std::optional<Best> best;
      const CellGeometry::Span span = geom.covering(here, w);
      auto scan_cell = [&](std::size_t k) {
        const std::uint32_t b = seg_begin[k];
        const std::uint32_t e = seg_begin[k + 1] - 1;
        const auto by_time = std::lower_bound(slot_start.begin() + b, slot_start.begin() + e, ready);
        const auto by_order = std::upper_bound(slot_pos.begin() + b, slot_pos.begin() + e, cur);
        std::uint32_t j = slots.find(static_cast<std::uint32_t>(
            std::max(by_time - slot_start.begin(), by_order - slot_pos.begin())));
        while (j < e) {
          const Timestamp st = slot_start[j];
          if (best && st > best->start) break;
          const double dx = q.x - slot_xyz.x[j];
          const double dy = q.y - slot_xyz.y[j];
          const double dz = q.z - slot_xyz.z[j];
          if (dx * dx + dy * dy + dz * dz < band.hi) {
            const std::uint32_t pos = slot_pos[j];
            const double d = haversine_m(here, origins[pos]);
            if (d < w) {
              const Best cand{st, d, pos};
              if (!best || cand.start < best->start ||
                  (cand.start == best->start &&
                   (cand.dist < best->dist || (cand.dist == best->dist && trips[pos].id < trips[best->pos].id)))) {
                best = cand;
              }
            }
          }
          j = slots.find(j + 1);
        }
      };
      if (span.all_x) {
        for (std::size_t k = 0; k < keys.size(); ++k) {
          if (keys[k].y >= span.lo.y && keys[k].y <= span.hi.y) scan_cell(k);
        }
      } else {
        for (std::int64_t y = span.lo.y; y <= span.hi.y; ++y) {
          auto it = std::lower_bound(keys.begin(), keys.end(), CellKey{static_cast<std::int32_t>(y), span.lo.x});
          for (; it != keys.end() && it->y == y && it->x <= span.hi.x; ++it) {
            scan_cell(static_cast<std::size_t>(it - keys.begin()));
          }
        }
      }
      if (!best) break;
      slots.remove(slot_of[best->pos]);
      global.remove(best->pos);
      chain.push_back(best->pos);
      cur = best->pos;
    }
    chains.push_back(std::move(chain));
  }
  return chains;
}

}  // namespace

const char* to_string(MatchMode mode) { return mode == MatchMode::station ? "station" : "dockless"; }

std::optional<MatchMode> parse_match_mode(std::string_view text) {
  if (text == "station" || text == "sbbs") return MatchMode::station;
  if (text == "dockless" || text == "dbs") return MatchMode::dockless;
  return std::nullopt;
}

void MatchConfig::validate() const {
  if (!(walk_radius_m > 0.0)) throw Error(ErrorKind::precondition, "walk radius w must be positive");
  if (usage_interval_s < 0) throw Error(ErrorKind::precondition, "usage interval c must be non-negative");
}

bool can_follow(const Trip& prev, const Trip& next, const MatchConfig& cfg) {
  if (next.start_time < prev.end_time + cfg.usage_interval_s) return false;
  if (!trip_order_less(prev, next)) return false;
  if (cfg.mode == MatchMode::station) {
    return prev.destination.station_id() == next.origin.station_id();
  }
  return haversine_m(prev.destination.point(), next.origin.point()) < cfg.walk_radius_m;
}

DayTrips::DayTrips(TripSet trips) : trips_(std::move(trips)) {
  by_id_.reserve(trips_.size());
  for (std::size_t i = 0; i < trips_.size(); ++i) by_id_.emplace_back(trips_[i].id, static_cast<std::uint32_t>(i));
  std::sort(by_id_.begin(), by_id_.end());
  for (std::size_t i = 1; i < by_id_.size(); ++i) {
    if (by_id_[i].first == by_id_[i - 1].first) {
      throw Error(ErrorKind::data, "duplicate trip id " + std::to_string(by_id_[i].first));
    }
  }
}

std::size_t DayTrips::position(TripId id) const {
  const auto it = std::lower_bound(by_id_.begin(), by_id_.end(), std::pair<TripId, std::uint32_t>{id, 0});
  if (it == by_id_.end() || it->first != id) {
    throw Error(ErrorKind::precondition, "trip " + std::to_string(id) + " is not part of this day");
  }
  return it->second;
}

bool DayTrips::contains(TripId id) const {
  const auto it = std::lower_bound(by_id_.begin(), by_id_.end(), std::pair<TripId, std::uint32_t>{id, 0});
  return it != by_id_.end() && it->first == id;
}

std::size_t FleetSolution::bike_of(TripId id) const { return assignment_by_position.at(trips->position(id)); }

std::map<TripId, std::size_t> FleetSolution::trip_assignment() const {
  std::map<TripId, std::size_t> out;
  for (const BikeChain& c : chains) {
    for (TripId id : c.trip_ids) out.emplace(id, c.bike_ord);
  }
  return out;
}

FleetSolution build_min_fleet(const TripSet& day_trips, const MatchConfig& cfg) {
  cfg.validate();
  check_modes(day_trips, cfg);
  const auto chains = cfg.mode == MatchMode::station
                          ? greedy_station(day_trips.trips(), cfg.usage_interval_s)
                          : greedy_dockless(day_trips.trips(), cfg.walk_radius_m, cfg.usage_interval_s);
  return make_solution(day_trips, cfg, chains);
}

std::optional<TripId> greedy_successor(const Trip& last, std::span<const Trip> pool, const MatchConfig& cfg) {
  const Trip* best = nullptr;
  double best_dist = 0.0;
  for (const Trip& t : pool) {
    if (best && t.start_time > best->start_time) break;
    if (!can_follow(last, t, cfg)) continue;
    const double d = cfg.mode == MatchMode::dockless ? haversine_m(last.destination.point(), t.origin.point()) : 0.0;
    if (!best || t.start_time < best->start_time || d < best_dist || (d == best_dist && t.id < best->id)) {
      best = &t;
      best_dist = d;
    }
  }
  if (!best) return std::nullopt;
  return best->id;
}

FleetSolution build_min_fleet_reference(const TripSet& day_trips, const MatchConfig& cfg) {
  cfg.validate();
  check_modes(day_trips, cfg);
  const std::span<const Trip> trips = day_trips.trips();
  std::vector<bool> used(trips.size(), false);
  std::vector<std::vector<std::uint32_t>> chains;
  std::vector<Trip> pool;
  for (std::size_t i = 0; i < trips.size(); ++i) {
    if (used[i]) continue;
    used[i] = true;
    std::vector<std::uint32_t> chain{static_cast<std::uint32_t>(i)};
    std::size_t cur = i;
    while (true) {
      pool.clear();
      for (std::size_t j = 0; j < trips.size(); ++j) {
        if (!used[j]) pool.push_back(trips[j]);
      }
      const auto next = greedy_successor(trips[cur], pool, cfg);
      if (!next) break;
      std::size_t pos = 0;
      while (trips[pos].id != *next) ++pos;
      used[pos] = true;
      chain.push_back(static_cast<std::uint32_t>(pos));
      cur = pos;
    }
    chains.push_back(std::move(chain));
  }
  return make_solution(day_trips, cfg, chains);
}

std::vector<std::string> validate_solution(const FleetSolution& sol) {
  std::vector<std::string> problems;
  if (!sol.trips) return {"solution has no trip data"};
  const DayTrips& dt = *sol.trips;
  std::vector<int> seen(dt.size(), 0);
  const Trip* prev_first = nullptr;
  for (std::size_t b = 0; b < sol.chains.size(); ++b) {
    const BikeChain& c = sol.chains[b];
    const std::string tag = "bike " + std::to_string(b);
    if (c.bike_ord != b) problems.push_back(tag + ": bike_ord " + std::to_string(c.bike_ord));
    if (c.trip_ids.empty()) {
      problems.push_back(tag + ": empty chain");
      continue;
    }
    const Trip* prev = nullptr;
    for (TripId id : c.trip_ids) {
      if (!dt.contains(id)) {
        problems.push_back(tag + ": unknown trip " + std::to_string(id));
        continue;
      }
      const std::size_t pos = dt.position(id);
      ++seen[pos];
      const Trip& t = dt.trips()[pos];
      if (prev && !can_follow(*prev, t, sol.config)) {
        problems.push_back(tag + ": trip " + std::to_string(t.id) + " cannot follow trip " + std::to_string(prev->id));
      }
      prev = &t;
    }
    if (!dt.contains(c.trip_ids.front()) || !prev) continue;
    const Trip& first = dt.at(c.trip_ids.front());
    if (!(c.initial_place == first.origin)) problems.push_back(tag + ": initial place differs from first origin");
    if (!(c.final_place == prev->destination)) problems.push_back(tag + ": final place differs from last destination");
    if (c.available_from != prev->end_time) problems.push_back(tag + ": available_from differs from last end time");
    if (prev_first && !trip_order_less(*prev_first, first)) problems.push_back(tag + ": chains not ordered by first trip");
    prev_first = &first;
  }
  for (std::size_t i = 0; i < seen.size(); ++i) {
    if (seen[i] != 1) {
      problems.push_back("trip " + std::to_string(dt.trips()[i].id) + " covered " + std::to_string(seen[i]) + " times");
    }
  }
  return problems;
}

std::int64_t DemandProfile::total() const {
  std::int64_t s = 0;
  for (const auto& [place, count] : demand) s += count;
  return s;
}

PlaceId place_id_of(const PlaceRef& place, const VirtualStationSet* places) {
  if (place.is_station()) return place.station_id();
  if (places == nullptr) throw Error(ErrorKind::precondition, "dockless places need a virtual station set");
  return assign_place(place.point(), *places).vs_id;
}

DemandProfile bike_demand_by_place(const FleetSolution& sol, const VirtualStationSet* places) {
  DemandProfile profile;
  profile.day = sol.day;
  for (const BikeChain& c : sol.chains) ++profile.demand[place_id_of(c.initial_place, places)];
  return profile;
}

}  // namespace bikefleet
