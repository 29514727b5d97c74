#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "bikefleet/civil_time.hpp"
#include "bikefleet/matcher.hpp"

namespace bikefleet {

using PlaceCountMap = std::map<PlaceId, std::int64_t>;

struct AllocationPlan {
  CivilDate for_day;
  PlaceCountMap allocation;
  std::size_t window_u = 0;
  std::vector<CivilDate> source_days;

  /// Recommended fleet size.
  std::int64_t total() const;
  std::int64_t at(PlaceId p) const;
};

struct PlaceCounts {
  CivilDate day;
  PlaceCountMap at_end;

  std::int64_t total() const;
};

struct PlaceFlows {
  PlaceCountMap inflow;
  PlaceCountMap outflow;
};

struct RebalancingPlan {
  CivilDate for_day;
  PlaceCountMap move_in;
  std::int64_t total_moves = 0;
};

/// allocation[p] = max over the u days before target_day of demand[p], with a
/// day that lacks p counting as 0. `history` may hold other days too; it must
/// hold every one of the u window days. Throws Error(precondition) for u == 0
/// and Error(data) naming each missing date.
AllocationPlan rolling_max_allocation(const std::vector<DemandProfile>& history, std::size_t u,
                                      CivilDate target_day);

/// at_end[p] = initial[p] + inflow[p] - outflow[p]. Throws Error(consistency)
/// when a count would go negative.
PlaceCounts compute_final_distribution(const AllocationPlan& initial, const PlaceFlows& served);

/// move_in[p] = max(0, plan[p] - final[p]). Surplus bikes stay where they are.
RebalancingPlan compute_rebalancing(const PlaceCounts& final_today, const AllocationPlan& plan_tomorrow);

}  // namespace bikefleet
