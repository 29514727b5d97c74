#include "bikefleet/scenarios.hpp"

#include <algorithm>

#include "bikefleet/error.hpp"
#include "bikefleet/ingest.hpp"
#include "bikefleet/parallel.hpp"

namespace bikefleet {

std::vector<SweepRow> sweep_usage_interval(const TripSet& day_trips, const MatchConfig& base,
                                           const std::vector<Timestamp>& c_values, std::size_t jobs) {
  if (c_values.empty() || c_values.front() != 0 || std::adjacent_find(c_values.begin(), c_values.end(),
                                                                       std::greater_equal<>()) != c_values.end()) {
    throw Error(ErrorKind::precondition, "usage intervals must be strictly ascending and start at 0");
  }
  std::vector<SweepRow> rows(c_values.size());
  parallel_for(c_values.size(), jobs, [&](std::size_t i) {
    MatchConfig cfg = base;
    cfg.usage_interval_s = c_values[i];
    rows[i].c = c_values[i];
    rows[i].fleet_size = build_min_fleet(day_trips, cfg).fleet_size();
  });
  const double baseline = static_cast<double>(rows.front().fleet_size);
  for (SweepRow& r : rows) {
    r.relative_increase = baseline == 0.0 ? 0.0 : (static_cast<double>(r.fleet_size) - baseline) / baseline;
  }
  return rows;
}

PlatformComparison compare_platforms(const TripSet& day_trips, const MatchConfig& cfg, std::size_t jobs) {
  const std::map<int, TripSet> parts = split_by_company(day_trips);
  PlatformComparison out;
  if (!day_trips.empty()) out.day = date_of(day_trips[0].start_time);
  std::vector<const std::pair<const int, TripSet>*> items;
  for (const auto& kv : parts) items.push_back(&kv);
  std::vector<std::size_t> fleets(items.size() + 1);
  parallel_for(items.size() + 1, jobs, [&](std::size_t i) {
    const TripSet& ts = i < items.size() ? items[i]->second : day_trips;
    fleets[i] = build_min_fleet(ts, cfg).fleet_size();
  });
  for (std::size_t i = 0; i < items.size(); ++i) {
    CompanyFleet cf;
    cf.trips = items[i]->second.size();
    cf.fleet_size = fleets[i];
    cf.turnover = cf.fleet_size == 0 ? 0.0 : static_cast<double>(cf.trips) / static_cast<double>(cf.fleet_size);
    out.per_company[items[i]->first] = cf;
    out.sum_fleet += cf.fleet_size;
  }
  out.merged_fleet = fleets.back();
  out.reduction_vs_sum =
      out.sum_fleet == 0 ? 0.0 : 1.0 - static_cast<double>(out.merged_fleet) / static_cast<double>(out.sum_fleet);
  if (parts.size() <= 1) {
    out.warning = "only one company present; nothing to merge";
    out.reduction_vs_sum = 0.0;
  }
  return out;
}

}  // namespace bikefleet
