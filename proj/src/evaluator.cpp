#include "bikefleet/evaluator.hpp"

#include <algorithm>
#include <limits>
#include <tuple>
#include <unordered_map>

#include "bikefleet/error.hpp"
#include "bikefleet/geo.hpp"
#include "bikefleet/grid_index.hpp"

namespace bikefleet {
namespace {

void finish_ratio(UnmetReport& r) {
  r.zero_trip_day = r.total_trips == 0;
  r.unmet_ratio = r.total_trips == 0 ? 0.0 : static_cast<double>(r.unmet_trips) / static_cast<double>(r.total_trips);
}

struct CellHash {
  std::size_t operator()(const CellKey& k) const {
    return std::hash<std::uint64_t>{}((static_cast<std::uint64_t>(static_cast<std::uint32_t>(k.y)) << 32) |
                                      static_cast<std::uint32_t>(k.x));
  }
};

/// Bike positions bucketed by grid cell; supports moves.
class BikeGrid {
 public:
  explicit BikeGrid(CellGeometry geom) : geom_(geom) {}

  void insert(std::uint32_t bike, GeoPoint p) {
    const CellKey key = geom_.cell_of(p);
    auto& bucket = cells_[key];
    if (bike >= cell_.size()) {
      cell_.resize(bike + 1);
      slot_.resize(bike + 1);
    }
    cell_[bike] = key;
    slot_[bike] = bucket.size();
    bucket.push_back(bike);
    ++count_;
  }

  void erase(std::uint32_t bike) {
    auto& bucket = cells_.at(cell_[bike]);
    const std::uint32_t moved = bucket.back();
    bucket[slot_[bike]] = moved;
    slot_[moved] = slot_[bike];
    bucket.pop_back();
    --count_;
  }

  template <class F>
  void for_each_near(GeoPoint center, double r, F&& f) const {
    const CellGeometry::Span span = geom_.covering(center, r);
    if (span.all_x) {
      for (const auto& [key, bucket] : cells_) {
        if (key.y >= span.lo.y && key.y <= span.hi.y) {
          for (std::uint32_t b : bucket) f(b);
        }
      }
      return;
    }
    for (std::int64_t y = span.lo.y; y <= span.hi.y; ++y) {
      for (std::int64_t x = span.lo.x; x <= span.hi.x; ++x) {
        const auto it = cells_.find(CellKey{static_cast<std::int32_t>(y), static_cast<std::int32_t>(x)});
        if (it == cells_.end()) continue;
        for (std::uint32_t b : it->second) f(b);
      }
    }
  }

  std::size_t count() const { return count_; }

 private:
  CellGeometry geom_;
  std::unordered_map<CellKey, std::vector<std::uint32_t>, CellHash> cells_;
  std::vector<CellKey> cell_;
  std::vector<std::size_t> slot_;
  std::size_t count_ = 0;
};

}  // namespace

Evaluation unmet_ratio_station(const FleetSolution& actual, const AllocationPlan& plan) {
  if (actual.config.mode != MatchMode::station) {
    throw Error(ErrorKind::precondition, "the station method needs a station-mode solution");
  }
  const DayTrips& dt = *actual.trips;
  std::map<PlaceId, std::vector<std::size_t>> chains_at;
  for (std::size_t b = 0; b < actual.chains.size(); ++b) {
    chains_at[actual.chains[b].initial_place.station_id()].push_back(b);
  }
  if (!chains_at.empty() && !plan.allocation.empty() &&
      std::none_of(chains_at.begin(), chains_at.end(),
                   [&](const auto& kv) { return plan.allocation.count(kv.first) != 0; })) {
    throw Error(ErrorKind::precondition, "allocation plan and solution share no station");
  }

  Evaluation ev;
  UnmetReport& rep = ev.report;
  rep.day = actual.day;
  rep.total_trips = static_cast<std::int64_t>(dt.size());
  std::vector<bool> unmet_bike(actual.chains.size(), false);
  for (auto& [station, bikes] : chains_at) {
    const std::int64_t demand = static_cast<std::int64_t>(bikes.size());
    const std::int64_t g = std::max<std::int64_t>(0, demand - plan.at(station));
    if (g == 0) continue;
    rep.per_place_gap[station] = g;
    // Chains are already in first-trip order; the last g are the latest.
    for (std::size_t i = bikes.size() - static_cast<std::size_t>(g); i < bikes.size(); ++i) {
      unmet_bike[bikes[i]] = true;
    }
  }

  SimResult& sim = ev.sim;
  std::map<PlaceId, std::int64_t> spare = plan.allocation;
  for (std::size_t b = 0; b < actual.chains.size(); ++b) {
    const BikeChain& c = actual.chains[b];
    if (unmet_bike[b]) {
      rep.unmet_trips += static_cast<std::int64_t>(c.trip_ids.size());
      sim.unmet.insert(sim.unmet.end(), c.trip_ids.begin(), c.trip_ids.end());
      continue;
    }
    --spare[c.initial_place.station_id()];
    for (TripId id : c.trip_ids) {
      const Trip& t = dt.at(id);
      sim.served.push_back(id);
      ++sim.flows.outflow[t.origin.station_id()];
      ++sim.flows.inflow[t.destination.station_id()];
    }
    sim.final_positions.push_back(c.final_place);
    sim.final_places.push_back(c.final_place.station_id());
  }
  for (const auto& [station, n] : spare) {
    for (std::int64_t i = 0; i < n; ++i) {
      sim.final_positions.push_back(PlaceRef::station(station));
      sim.final_places.push_back(station);
    }
  }
  std::sort(sim.served.begin(), sim.served.end());
  std::sort(sim.unmet.begin(), sim.unmet.end());
  finish_ratio(rep);
  return ev;
}

Evaluation simulate_dockless_day(const TripSet& day_trips, const AllocationPlan& plan, const VirtualStationSet& vs,
                                 const MatchConfig& cfg) {
  cfg.validate();
  if (vs.empty()) throw Error(ErrorKind::precondition, "dockless simulation needs virtual stations");
  struct Bike {
    GeoPoint pos;
    Timestamp idle_since;
    bool fresh;  // never used today
    PlaceId place;
  };
  // Never-used bikes count as idle since the start of time.
  auto idle_key = [](const Bike& b) { return b.fresh ? std::numeric_limits<Timestamp>::min() : b.idle_since; };
  std::vector<Bike> bikes;
  for (const auto& [p, n] : plan.allocation) {
    if (p < 0 || static_cast<std::size_t>(p) >= vs.size()) {
      throw Error(ErrorKind::precondition, "plan place " + std::to_string(p) + " is not a virtual station id");
    }
    if (n < 0) throw Error(ErrorKind::precondition, "negative allocation at place " + std::to_string(p));
    for (std::int64_t i = 0; i < n; ++i) bikes.push_back({vs.stations()[p].center, 0, true, p});
  }
  const std::size_t fleet = bikes.size();
  const double w = cfg.walk_radius_m;
  const ChordBand band = ChordBand::for_radius(w);
  BikeGrid grid(CellGeometry(vs.stations().front().center, w));
  for (std::size_t b = 0; b < fleet; ++b) grid.insert(static_cast<std::uint32_t>(b), bikes[b].pos);

  Evaluation ev;
  UnmetReport& rep = ev.report;
  SimResult& sim = ev.sim;
  rep.day = day_trips.empty() ? plan.for_day : date_of(day_trips[0].start_time);
  rep.total_trips = static_cast<std::int64_t>(day_trips.size());

  constexpr std::uint32_t kNone = std::numeric_limits<std::uint32_t>::max();
  for (const Trip& t : day_trips.trips()) {
    const GeoPoint origin = t.origin.point();
    const simd::Query q = to_cartesian(origin);
    std::uint32_t best = kNone;
    double best_d = 0.0;
    grid.for_each_near(origin, w, [&](std::uint32_t b) {
      const Bike& bk = bikes[b];
      if (!bk.fresh && bk.idle_since > t.start_time - cfg.usage_interval_s) return;
      const simd::Query p = to_cartesian(bk.pos);
      const double dx = q.x - p.x, dy = q.y - p.y, dz = q.z - p.z;
      if (!(dx * dx + dy * dy + dz * dz < band.hi)) return;
      const double d = haversine_m(origin, bk.pos);
      if (!(d < w)) return;
      if (best != kNone && std::tuple(d, idle_key(bk), b) >= std::tuple(best_d, idle_key(bikes[best]), best)) return;
      best = b;
      best_d = d;
    });
    if (best == kNone) {
      sim.unmet.push_back(t.id);
      ++rep.unmet_trips;
      ++rep.per_place_gap[assign_place(origin, vs).vs_id];
    } else {
      Bike& bk = bikes[best];
      const PlaceId to = assign_place(t.destination.point(), vs).vs_id;
      ++sim.flows.outflow[bk.place];
      ++sim.flows.inflow[to];
      grid.erase(best);
      bk.pos = t.destination.point();
      bk.idle_since = t.end_time;
      bk.fresh = false;
      bk.place = to;
      grid.insert(best, bk.pos);
      sim.served.push_back(t.id);
    }
    if (grid.count() != fleet) {
      throw Error(ErrorKind::consistency, "bike count drifted to " + std::to_string(grid.count()) + " of " +
                                              std::to_string(fleet) + " after trip " + std::to_string(t.id));
    }
  }
  for (const Bike& bk : bikes) {
    sim.final_positions.push_back(PlaceRef::coordinate(bk.pos));
    sim.final_places.push_back(bk.place);
  }
  std::sort(sim.served.begin(), sim.served.end());
  std::sort(sim.unmet.begin(), sim.unmet.end());
  finish_ratio(rep);
  return ev;
}

double fleet_metrics(std::int64_t active_fleet, std::int64_t min_fleet) {
  if (active_fleet <= 0) throw Error(ErrorKind::precondition, "active fleet size must be positive");
  return static_cast<double>(active_fleet - min_fleet) / static_cast<double>(active_fleet);
}

}  // namespace bikefleet
