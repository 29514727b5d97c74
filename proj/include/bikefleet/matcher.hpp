#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "bikefleet/trip.hpp"
#include "bikefleet/virtual_stations.hpp"

namespace bikefleet {

enum class MatchMode { station, dockless };

const char* to_string(MatchMode mode);
std::optional<MatchMode> parse_match_mode(std::string_view text);

struct MatchConfig {
  MatchMode mode = MatchMode::station;
  double walk_radius_m = 250.0;      // dockless spatial proximity, strict <
  Timestamp usage_interval_s = 0;    // minimum idle time between two riders

  /// Throws Error(precondition) for w <= 0 or c < 0.
  void validate() const;
};

/// True when `next` may be ridden on the same bike right after `prev`:
///  - next starts no earlier than prev ends plus the usage interval,
///  - next comes after prev in (start_time, id) order,
///  - station mode: next leaves from the station prev arrived at;
///    dockless: next's origin is strictly within w of prev's destination.
/// The bike stays where prev left it; the rider walks the gap.
bool can_follow(const Trip& prev, const Trip& next, const MatchConfig& cfg);

/// Trips of one day plus an id lookup, shared read-only by solutions.
class DayTrips {
 public:
  explicit DayTrips(TripSet trips);

  const TripSet& trips() const { return trips_; }
  std::size_t size() const { return trips_.size(); }
  /// Position of a trip in (start_time, id) order.
  std::size_t position(TripId id) const;
  const Trip& at(TripId id) const { return trips_[position(id)]; }
  bool contains(TripId id) const;

 private:
  TripSet trips_;
  std::vector<std::pair<TripId, std::uint32_t>> by_id_;
};

struct BikeChain {
  std::size_t bike_ord = 0;         // creation order
  std::vector<TripId> trip_ids;     // in riding order
  PlaceRef initial_place;           // where the bike must stand at the start of the day
  PlaceRef final_place;             // where it stands after its last trip
  Timestamp available_from = 0;     // end of the last trip
  PlaceRef current_pos;             // equals final_place once the chain is complete
};

struct FleetSolution {
  std::vector<BikeChain> chains;  // ordered by first trip
  CivilDate day;
  MatchConfig config;
  std::shared_ptr<const DayTrips> trips;

  std::size_t fleet_size() const { return chains.size(); }
  /// bike_ord serving a trip. Throws Error(precondition) for unknown ids.
  std::size_t bike_of(TripId id) const;
  /// trip id -> bike_ord for every covered trip.
  std::map<TripId, std::size_t> trip_assignment() const;

  std::vector<std::size_t> assignment_by_position;  // parallel to trips->trips()
};

/// Greedy minimum fleet for one day: repeatedly start a bike at the earliest
/// unassigned trip and keep attaching the greedy successor until none exists.
/// Station mode runs on per-station queues; dockless mode searches a grid of
/// trip origins. Throws Error(precondition) when trip places do not match the
/// mode or `day_trips` spans several days.
FleetSolution build_min_fleet(const TripSet& day_trips, const MatchConfig& cfg);

/// Reference successor rule on an explicit pool of unassigned trips: the
/// trip with the smallest start time among those that can follow `last`; ties
/// go to the smaller walking distance (dockless) and then the lower trip id.
std::optional<TripId> greedy_successor(const Trip& last, std::span<const Trip> pool, const MatchConfig& cfg);

/// Same greedy procedure as build_min_fleet, driven by greedy_successor over a
/// linear pool. Quadratic; intended for cross-checking small instances.
FleetSolution build_min_fleet_reference(const TripSet& day_trips, const MatchConfig& cfg);

/// Minimum path cover of the chain-compatibility DAG, computed as
/// trips - maximum bipartite matching (Hopcroft-Karp). Throws
/// Error(precondition) above `guard` trips.
inline constexpr std::size_t kOracleGuard = 20000;
std::size_t min_fleet_oracle(const TripSet& day_trips, const MatchConfig& cfg, std::size_t guard = kOracleGuard);

/// Every problem found when re-checking a solution against its trips and
/// config: coverage, chain rule, endpoints, ordering. Empty means valid.
std::vector<std::string> validate_solution(const FleetSolution& sol);

struct DemandProfile {
  CivilDate day;
  std::map<PlaceId, std::int64_t> demand;

  std::int64_t total() const;
  bool operator==(const DemandProfile&) const = default;
};

/// Bikes needed per place at the start of the day: chains counted by initial
/// place. Dockless solutions need `places`; initial positions map to their
/// nearest virtual station.
DemandProfile bike_demand_by_place(const FleetSolution& sol, const VirtualStationSet* places = nullptr);

/// Place id of a trip endpoint: the station id, or the nearest virtual station.
PlaceId place_id_of(const PlaceRef& place, const VirtualStationSet* places);

/// Two bikes idle together at one place and time.
struct Intersection {
  std::size_t bike_a = 0;
  std::size_t bike_b = 0;
  PlaceRef place;
  Timestamp time = 0;
};

/// Exchanges the suffixes of two chains after the moment both bikes stand idle
/// at `place` (each bike free since its previous trip ended plus c, and no
/// later trip started). The result keeps every trip and the fleet size.
/// Throws Error(precondition) when the bikes do not intersect there.
FleetSolution apply_break_reconnect(const FleetSolution& sol, std::size_t bike_a, std::size_t bike_b,
                                    const PlaceRef& place, Timestamp time);

/// Up to `limit` intersections between idle windows of distinct bikes at
/// identical places, in deterministic order.
std::vector<Intersection> find_intersections(const FleetSolution& sol, std::size_t limit);

/// Rebuilds chain endpoints and bike ordering after chains were edited.
void normalize_chains(FleetSolution& sol);

}  // namespace bikefleet
