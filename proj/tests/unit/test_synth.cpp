#include <doctest.h>

#include <cmath>
#include <sstream>

#include "bikefleet/error.hpp"
#include "bikefleet/ingest.hpp"
#include "bikefleet/stats.hpp"
#include "bikefleet/synth.hpp"

using namespace bikefleet;

namespace {

SynthConfig small(std::uint64_t seed) {
  SynthConfig cfg;
  cfg.base_daily_trips = 600;
  cfg.seed = seed;
  return cfg;
}

std::vector<double> daily_counts(const TripSet& ts) {
  std::vector<double> out;
  for (const auto& [d, day] : split_by_day(ts)) out.push_back(static_cast<double>(day.size()));
  return out;
}

}  // namespace

TEST_CASE("same seed, same trips") {
  const SynthData a = generate_trips(small(5));
  const SynthData b = generate_trips(small(5));
  CHECK(a.trips == b.trips);
  CHECK(!(a.trips == generate_trips(small(6)).trips));
  CHECK(a.places.size() == 50);
}

TEST_CASE("weekday and weekend volumes follow the factors") {
  SynthConfig cfg = small(7);
  cfg.daily_noise_cv = 0.0;
  cfg.weekend_factor = 0.5;
  const SynthData d = generate_trips(cfg);
  const std::vector<double> counts = daily_counts(d.trips);
  REQUIRE(counts.size() == 14);
  // The start date is a Monday.
  CHECK(counts[0] == doctest::Approx(2.0 * counts[5]).epsilon(0.01));
  CHECK(counts[1] == doctest::Approx(600).epsilon(0.01));
}

TEST_CASE("mean daily volume stays near the expectation") {
  for (std::uint64_t seed : {1, 2, 3, 4, 5}) {
    const SynthConfig cfg = small(seed);
    const SynthData d = generate_trips(cfg);
    const std::vector<double> counts = daily_counts(d.trips);
    double got = 0, want = 0;
    for (std::size_t i = 0; i < counts.size(); ++i) {
      got += counts[i];
      want += d.expected_daily[i];
    }
    CHECK(std::abs(got / want - 1.0) < 3.0 * cfg.daily_noise_cv / std::sqrt(14.0));
  }
}

TEST_CASE("synthetic trips pass cleaning untouched") {
  for (MatchMode mode : {MatchMode::station, MatchMode::dockless}) {
    SynthConfig cfg = small(9);
    cfg.mode = mode;
    cfg.n_companies = 2;
    const SynthData d = generate_trips(cfg);
    const CleanResult cleaned =
        clean_trips(to_raw(d.trips, mode == MatchMode::station ? Schema::sbbs : Schema::dbs), cfg.bbox, &d.places);
    CHECK(cleaned.report.kept == d.trips.size());
    CHECK(cleaned.report.reconciles());
    for (const Trip& t : d.trips.trips()) {
      CHECK(t.end_time > t.start_time);
      CHECK(t.company_id.has_value());
      if (mode == MatchMode::dockless) {
        CHECK(cfg.bbox.contains(t.origin.point()));
        CHECK(cfg.bbox.contains(t.destination.point()));
      }
    }
  }
}

TEST_CASE("weekly seasonality: week-to-week error below day-to-day") {
  SynthConfig cfg = small(11);
  cfg.days = 28;
  const std::vector<double> counts = daily_counts(generate_trips(cfg).trips);
  const SeriesStats st = summary_stats_daily(counts);
  CHECK(st.rrmse_lag.at(7) < st.rrmse_lag.at(1));
}

TEST_CASE("invalid configurations") {
  SynthConfig cfg;
  cfg.n_places = 0;
  CHECK_THROWS_AS(generate_trips(cfg), Error);
  cfg = SynthConfig{};
  cfg.days = 0;
  CHECK_THROWS_AS(generate_trips(cfg), Error);
  cfg = SynthConfig{};
  cfg.weekend_factor = 0.0;
  CHECK_THROWS_AS(generate_trips(cfg), Error);
}
