#include <doctest.h>

#include "../support/fixtures.hpp"
#include "bikefleet/error.hpp"
#include "bikefleet/scenarios.hpp"

using namespace bikefleet;
using namespace fixtures;

namespace {

const MatchConfig kStation{MatchMode::station, 250.0, 0};

TripSet with_companies(const TripSet& ts, Rng& rng, std::uint64_t n) {
  std::vector<Trip> trips(ts.trips().begin(), ts.trips().end());
  for (Trip& t : trips) t.company_id = static_cast<int>(rng.below(n));
  return TripSet(std::move(trips));
}

}  // namespace

TEST_CASE("usage interval sweep") {
  Rng rng(71);
  for (int round = 0; round < 20; ++round) {
    const TripSet ts = random_station_day(rng, 150, 6);
    const auto rows = sweep_usage_interval(ts, kStation, {0, 3600, 21600});
    REQUIRE(rows.size() == 3);
    CHECK(rows[0].relative_increase == 0.0);
    CHECK(rows[0].fleet_size <= rows[1].fleet_size);
    CHECK(rows[1].fleet_size <= rows[2].fleet_size);
    const double expect = static_cast<double>(rows[2].fleet_size) / static_cast<double>(rows[0].fleet_size) - 1.0;
    CHECK(rows[2].relative_increase == doctest::Approx(expect));
    CHECK(sweep_usage_interval(ts, kStation, {0, 3600, 21600}, 3).back().fleet_size == rows[2].fleet_size);
  }
  const TripSet ts = random_station_day(rng, 20, 3);
  CHECK_THROWS_AS(sweep_usage_interval(ts, kStation, {3600}), Error);
  CHECK_THROWS_AS(sweep_usage_interval(ts, kStation, {0, 3600, 600}), Error);
  CHECK_THROWS_AS(sweep_usage_interval(ts, kStation, {0, 0}), Error);
}

TEST_CASE("one company degenerates to no reduction") {
  Rng rng(72);
  const TripSet ts = with_companies(random_station_day(rng, 100, 5), rng, 1);
  const PlatformComparison pc = compare_platforms(ts, kStation);
  CHECK(pc.per_company.size() == 1);
  CHECK(pc.merged_fleet == pc.sum_fleet);
  CHECK(pc.reduction_vs_sum == 0.0);
  CHECK(!pc.warning.empty());
  CHECK_THROWS_AS(compare_platforms(random_station_day(rng, 10, 3), kStation), Error);
}

TEST_CASE("companies in separate regions gain nothing from merging") {
  Rng rng(73);
  std::vector<Trip> trips;
  const TripSet a = random_station_day(rng, 80, 5);
  const TripSet b = random_station_day(rng, 80, 5);
  for (Trip t : a.trips()) {
    t.company_id = 0;
    trips.push_back(t);
  }
  for (Trip t : b.trips()) {
    t.id += 1000;
    t.origin = PlaceRef::station(t.origin.station_id() + 100);
    t.destination = PlaceRef::station(t.destination.station_id() + 100);
    t.company_id = 1;
    trips.push_back(t);
  }
  const PlatformComparison pc = compare_platforms(TripSet(trips), kStation);
  CHECK(pc.merged_fleet == pc.sum_fleet);
  CHECK(pc.reduction_vs_sum == 0.0);
}

TEST_CASE("interleaved companies share bikes") {
  Rng rng(74);
  std::size_t strict = 0;
  for (int round = 0; round < 20; ++round) {
    const TripSet ts = with_companies(random_station_day(rng, 200, 6), rng, 2 + rng.below(2));
    const PlatformComparison pc = compare_platforms(ts, kStation, 2);
    CHECK(pc.merged_fleet <= pc.sum_fleet);
    if (pc.merged_fleet < pc.sum_fleet) ++strict;
    std::size_t trips = 0;
    for (const auto& [id, cf] : pc.per_company) {
      CHECK(static_cast<double>(cf.trips) == doctest::Approx(static_cast<double>(cf.fleet_size) * cf.turnover));
      trips += cf.trips;
    }
    CHECK(trips == ts.size());
    CHECK(pc.window_days == 1);
  }
  CHECK(strict > 0);
}
