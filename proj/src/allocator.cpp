#include "bikefleet/allocator.hpp"

#include <algorithm>

#include "bikefleet/error.hpp"

namespace bikefleet {
namespace {

std::int64_t sum(const PlaceCountMap& m) {
  std::int64_t s = 0;
  for (const auto& [p, v] : m) s += v;
  return s;
}

std::int64_t get(const PlaceCountMap& m, PlaceId p) {
  const auto it = m.find(p);
  return it == m.end() ? 0 : it->second;
}

}  // namespace

std::int64_t AllocationPlan::total() const { return sum(allocation); }
std::int64_t AllocationPlan::at(PlaceId p) const { return get(allocation, p); }
std::int64_t PlaceCounts::total() const { return sum(at_end); }

AllocationPlan rolling_max_allocation(const std::vector<DemandProfile>& history, std::size_t u,
                                      CivilDate target_day) {
  if (u == 0) throw Error(ErrorKind::precondition, "allocation window u must be at least one day");
  std::map<CivilDate, const DemandProfile*> by_day;
  for (const DemandProfile& d : history) by_day[d.day] = &d;

  AllocationPlan plan;
  plan.for_day = target_day;
  plan.window_u = u;
  std::string missing;
  for (std::size_t i = u; i >= 1; --i) {
    const CivilDate day = target_day.plus_days(-static_cast<std::int32_t>(i));
    plan.source_days.push_back(day);
    const auto it = by_day.find(day);
    if (it == by_day.end()) {
      missing += (missing.empty() ? "" : ", ") + day.to_string();
      continue;
    }
    for (const auto& [p, v] : it->second->demand) {
      std::int64_t& slot = plan.allocation[p];
      slot = std::max(slot, v);
    }
  }
  if (!missing.empty()) {
    throw Error(ErrorKind::data, "allocation for " + target_day.to_string() + " lacks history days: " + missing);
  }
  return plan;
}

PlaceCounts compute_final_distribution(const AllocationPlan& initial, const PlaceFlows& served) {
  PlaceCounts out;
  out.day = initial.for_day;
  out.at_end = initial.allocation;
  for (const auto& [p, v] : served.inflow) out.at_end[p] += v;
  for (const auto& [p, v] : served.outflow) out.at_end[p] -= v;
  for (const auto& [p, v] : out.at_end) {
    if (v < 0) {
      throw Error(ErrorKind::consistency, "place " + std::to_string(p) + " ends " + initial.for_day.to_string() +
                                              " with " + std::to_string(v) + " bikes");
    }
  }
  return out;
}

RebalancingPlan compute_rebalancing(const PlaceCounts& final_today, const AllocationPlan& plan_tomorrow) {
  RebalancingPlan out;
  out.for_day = plan_tomorrow.for_day;
  for (const auto& [p, want] : plan_tomorrow.allocation) {
    const std::int64_t need = std::max<std::int64_t>(0, want - get(final_today.at_end, p));
    out.move_in[p] = need;
    out.total_moves += need;
  }
  return out;
}

}  // namespace bikefleet
