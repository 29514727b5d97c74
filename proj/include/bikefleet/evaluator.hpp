#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "bikefleet/allocator.hpp"
#include "bikefleet/matcher.hpp"
#include "bikefleet/virtual_stations.hpp"

namespace bikefleet {

struct UnmetReport {
  CivilDate day;
  std::int64_t total_trips = 0;
  std::int64_t unmet_trips = 0;
  double unmet_ratio = 0.0;
  /// Station mode: g = max(0, demand - plan) per station. Dockless: unmet
  /// trips per origin virtual station.
  std::map<PlaceId, std::int64_t> per_place_gap;
  bool zero_trip_day = false;
};

struct SimResult {
  std::vector<TripId> served;
  std::vector<TripId> unmet;
  /// One entry per planned bike, in bike ordinal order.
  std::vector<PlaceRef> final_positions;
  std::vector<PlaceId> final_places;
  PlaceFlows flows;
};

struct Evaluation {
  UnmetReport report;
  SimResult sim;
};

/// Station method: at each station the g chains with the latest first trips
/// go unserved. Throws Error(precondition) when plan and demand share no
/// station while both are non-empty, or for a dockless solution.
Evaluation unmet_ratio_station(const FleetSolution& actual, const AllocationPlan& plan);

/// Dockless replay. Bikes start at virtual station centers (plan counts, in
/// vs_id order) and trips are taken in (start, id) order. A trip is served by
/// the nearest idle bike closer than w whose idle time reaches c; ties go to
/// the longest idle bike, then the lowest ordinal.
/// Throws Error(precondition) for plan places that are not station ids and
/// Error(consistency) if the bike count ever drifts.
Evaluation simulate_dockless_day(const TripSet& day_trips, const AllocationPlan& plan, const VirtualStationSet& vs,
                                 const MatchConfig& cfg);

/// (active - minimum) / active. Throws Error(precondition) when active is 0.
double fleet_metrics(std::int64_t active_fleet, std::int64_t min_fleet);

}  // namespace bikefleet
