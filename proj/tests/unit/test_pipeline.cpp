#include <doctest.h>

#include "bikefleet/error.hpp"
#include "bikefleet/ingest.hpp"
#include "bikefleet/pipeline.hpp"
#include "bikefleet/synth.hpp"

using namespace bikefleet;

namespace {

std::map<CivilDate, TripSet> synth_days(std::size_t days, MatchMode mode = MatchMode::station) {
  SynthConfig cfg;
  cfg.days = days;
  cfg.base_daily_trips = 800;
  cfg.mode = mode;
  cfg.seed = 314;
  return split_by_day(generate_trips(cfg).trips);
}

PipelineConfig station_config() {
  PipelineConfig cfg;
  cfg.match = {MatchMode::station, 250.0, 0};
  return cfg;
}

}  // namespace

TEST_CASE("pipeline rows, plans and the benefit of a longer window") {
  const auto by_day = synth_days(12);
  const PipelineReport rep = run_pipeline(by_day, station_config());
  REQUIRE(rep.rows.size() == 5 * 2);
  CHECK(rep.days.size() == 12);
  for (const EvaluationRow& row : rep.rows) {
    const std::size_t d = static_cast<std::size_t>(row.date.days_since_epoch() - by_day.begin()->first.days_since_epoch());
    CHECK(d >= 7);
    std::int64_t total = 0;
    for (const auto& [p, n] : row.plan) total += n;
    CHECK(total == row.recommended_fleet);
    if (row.u_days == 1) {
      const DemandProfile& prev = rep.profiles[d - 1];
      CHECK(row.plan == PlaceCountMap(prev.demand.begin(), prev.demand.end()));
    }
    std::int64_t final_total = 0;
    for (const auto& [p, n] : row.final_counts) final_total += n;
    CHECK(final_total == row.recommended_fleet);
  }
  CHECK(rep.mean_unmet_ratio(7) < rep.mean_unmet_ratio(1));
}

TEST_CASE("explicit evaluation days and short history") {
  const auto by_day = synth_days(9);
  PipelineConfig cfg = station_config();
  cfg.eval_days = {by_day.rbegin()->first};
  cfg.jobs = 2;
  const PipelineReport rep = run_pipeline(by_day, cfg);
  CHECK(rep.rows.size() == 2);

  const auto few = synth_days(5);
  try {
    run_pipeline(few, station_config());
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::precondition);
    CHECK(std::string(e.what()).find("2020-01-13") != std::string::npos);
  }
}

TEST_CASE("dockless pipeline identifies stations and reconciles counts") {
  const auto by_day = synth_days(9, MatchMode::dockless);
  PipelineConfig cfg;
  cfg.match = {MatchMode::dockless, 250.0, 0};
  cfg.clustering.k = 20;
  cfg.clustering.seed = 3;
  const PipelineReport rep = run_pipeline(by_day, cfg);
  REQUIRE(rep.stations.has_value());
  CHECK(rep.stations->size() == 20);
  CHECK(rep.rows.size() == 4);
  for (const EvaluationRow& row : rep.rows) {
    CHECK(row.unmet_trips <= row.total_trips);
    CHECK(row.unmet_trip_ratio >= 0.0);
  }
}
