#pragma once

#include <map>
#include <optional>
#include <vector>

#include "bikefleet/allocator.hpp"
#include "bikefleet/evaluator.hpp"
#include "bikefleet/matcher.hpp"
#include "bikefleet/virtual_stations.hpp"

namespace bikefleet {

struct PipelineConfig {
  MatchConfig match;
  std::vector<std::size_t> windows{1, 7};
  /// Evaluation days; empty means every day with enough history.
  std::vector<CivilDate> eval_days;
  ClusteringParams clustering;
  std::size_t jobs = 1;
};

struct DaySummary {
  CivilDate day;
  std::int64_t trips = 0;
  std::int64_t min_fleet = 0;
};

struct EvaluationRow {
  CivilDate date;
  std::size_t u_days = 0;
  std::int64_t recommended_fleet = 0;
  std::int64_t repositioning_next_day = 0;
  double unmet_trip_ratio = 0.0;
  std::int64_t unmet_trips = 0;
  std::int64_t total_trips = 0;
  std::int64_t min_fleet = 0;
  std::map<PlaceId, std::int64_t> per_place_gap;
  PlaceCountMap plan;
  PlaceCountMap final_counts;
};

struct PipelineReport {
  MatchMode mode = MatchMode::station;
  std::vector<DaySummary> days;
  std::vector<DemandProfile> profiles;
  /// Sorted by (date, u).
  std::vector<EvaluationRow> rows;
  std::optional<VirtualStationSet> stations;

  /// Mean of the daily unmet ratios for window u.
  double mean_unmet_ratio(std::size_t u) const;
};

/// Minimum fleet and demand profile for every day.
struct DailyFleets {
  std::vector<DaySummary> days;
  std::vector<DemandProfile> profiles;
};
DailyFleets daily_fleets(const std::map<CivilDate, TripSet>& by_day, const MatchConfig& cfg,
                         const VirtualStationSet* stations, std::size_t jobs);

/// For each evaluation day D and window u: plan D from the u previous demand
/// profiles, score D's trips against it, and rebalance D's final distribution
/// towards the plan for D+1. Dockless runs identify virtual stations from the
/// days before the first evaluation day unless `stations` is given.
/// Throws Error(precondition) naming the first evaluable date when history is
/// too short.
PipelineReport run_pipeline(const std::map<CivilDate, TripSet>& by_day, const PipelineConfig& cfg,
                            const VirtualStationSet* stations = nullptr);

}  // namespace bikefleet
