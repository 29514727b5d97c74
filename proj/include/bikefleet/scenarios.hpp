#pragma once

#include <map>
#include <string>
#include <vector>

#include "bikefleet/matcher.hpp"

namespace bikefleet {

struct SweepRow {
  Timestamp c = 0;
  std::size_t fleet_size = 0;
  double relative_increase = 0.0;  // vs the c = 0 row
};

/// One min-fleet run per usage interval. Throws Error(precondition) unless
/// c_values is strictly ascending and contains 0.
std::vector<SweepRow> sweep_usage_interval(const TripSet& day_trips, const MatchConfig& base,
                                           const std::vector<Timestamp>& c_values, std::size_t jobs = 1);

struct CompanyFleet {
  std::size_t trips = 0;
  std::size_t fleet_size = 0;
  double turnover = 0.0;  // trips per bike over the analyzed day
};

struct PlatformComparison {
  CivilDate day;
  std::map<int, CompanyFleet> per_company;
  std::size_t merged_fleet = 0;
  std::size_t sum_fleet = 0;
  double reduction_vs_sum = 0.0;
  std::size_t window_days = 1;
  std::string warning;
};

/// Companies operating separately vs one platform serving the same trips.
/// Throws Error(data) when a trip lacks a company id.
PlatformComparison compare_platforms(const TripSet& day_trips, const MatchConfig& cfg, std::size_t jobs = 1);

}  // namespace bikefleet
