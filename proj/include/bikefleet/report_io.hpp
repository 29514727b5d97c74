#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "bikefleet/allocator.hpp"
#include "bikefleet/matcher.hpp"
#include "bikefleet/pipeline.hpp"
#include "bikefleet/scenarios.hpp"
#include "bikefleet/stats.hpp"

namespace bikefleet::report {

/// day,place_id,bike_demand
std::string demand_csv(const std::vector<DemandProfile>& profiles);
/// Reads demand_csv output. Throws Error(schema) on a bad header.
std::vector<DemandProfile> read_demand_csv(std::istream& in);

/// Chains with their trip ids, one object per day.
std::string solutions_json(const std::vector<FleetSolution>& solutions);
/// day,trips,fleet_size
std::string fleet_csv(const std::vector<DaySummary>& days);

/// day,place_id,count
std::string counts_csv(const CivilDate& day, const PlaceCountMap& counts, bool header = true);
/// Reads day,place_id,count rows for one day (all rows when `day` is unset).
PlaceCountMap read_counts_csv(std::istream& in, std::optional<CivilDate> day = {});

std::string plan_json(const AllocationPlan& plan);
std::string rebalancing_json(const RebalancingPlan& plan);

/// date,u_days,recommended_fleet,repositioning_next_day,unmet_trip_ratio
std::string evaluation_csv(const std::vector<EvaluationRow>& rows);
/// Rows plus per-place gaps, daily fleets and series statistics.
std::string evaluation_json(const PipelineReport& report);

std::string stats_json(const SeriesStats& trips_stats);

/// day,c_seconds,fleet_size,relative_increase
std::string sweep_csv(const CivilDate& day, const std::vector<SweepRow>& rows, bool header = true);
/// day,company_id,trips,fleet_size,turnover (company "all" is the merged platform)
std::string platform_csv(const std::vector<PlatformComparison>& rows);
std::string platform_json(const std::vector<PlatformComparison>& rows);

}  // namespace bikefleet::report
