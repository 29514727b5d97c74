#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "bikefleet/ingest.hpp"
#include "bikefleet/matcher.hpp"

namespace bikefleet {

struct SynthConfig {
  std::size_t n_places = 50;
  Bounds bbox{31.95, 118.70, 32.10, 118.90};
  std::size_t days = 14;
  double base_daily_trips = 5000.0;
  double weekday_factor = 1.0;
  double weekend_factor = 0.6;
  double daily_noise_cv = 0.08;
  double duration_mean_s = 900.0;
  double duration_spread = 0.6;   // coefficient of variation of the lognormal
  double od_concentration = 0.8;  // Zipf exponent of place popularity
  MatchMode mode = MatchMode::station;
  double dockless_jitter_m = 100.0;
  std::size_t n_companies = 1;
  CivilDate start_date = CivilDate::from_ymd(2020, 1, 6);
  std::uint64_t seed = 20200106;

  /// Throws Error(precondition) for zero places or days, non-positive factors
  /// or a negative jitter.
  void validate() const;
  std::string to_json() const;
};

struct SynthData {
  TripSet trips;
  /// Place anchors; in station mode these are the stations.
  StationRegistry places;
  /// Expected trip count of each day before noise.
  std::vector<double> expected_daily;
};

/// Deterministic per seed. Each day draws its own stream, so days do not
/// depend on each other.
SynthData generate_trips(const SynthConfig& cfg);

}  // namespace bikefleet
