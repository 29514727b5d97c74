#include "bikefleet/pipeline.hpp"

#include <algorithm>

#include "bikefleet/error.hpp"
#include "bikefleet/parallel.hpp"

namespace bikefleet {

double PipelineReport::mean_unmet_ratio(std::size_t u) const {
  double sum = 0.0;
  std::size_t n = 0;
  for (const EvaluationRow& r : rows) {
    if (r.u_days != u) continue;
    sum += r.unmet_trip_ratio;
    ++n;
  }
  return n == 0 ? 0.0 : sum / static_cast<double>(n);
}

DailyFleets daily_fleets(const std::map<CivilDate, TripSet>& by_day, const MatchConfig& cfg,
                         const VirtualStationSet* stations, std::size_t jobs) {
  std::vector<const std::pair<const CivilDate, TripSet>*> days;
  for (const auto& kv : by_day) days.push_back(&kv);
  DailyFleets out;
  out.days.resize(days.size());
  out.profiles.resize(days.size());
  parallel_for(days.size(), jobs, [&](std::size_t i) {
    const FleetSolution sol = build_min_fleet(days[i]->second, cfg);
    out.days[i] = {days[i]->first, static_cast<std::int64_t>(days[i]->second.size()),
                   static_cast<std::int64_t>(sol.fleet_size())};
    out.profiles[i] = bike_demand_by_place(sol, stations);
    out.profiles[i].day = days[i]->first;
  });
  return out;
}

PipelineReport run_pipeline(const std::map<CivilDate, TripSet>& by_day, const PipelineConfig& cfg,
                            const VirtualStationSet* stations) {
  cfg.match.validate();
  if (by_day.empty()) throw Error(ErrorKind::precondition, "pipeline needs at least one day of trips");
  if (cfg.windows.empty() || std::find(cfg.windows.begin(), cfg.windows.end(), 0u) != cfg.windows.end()) {
    throw Error(ErrorKind::precondition, "allocation windows must be positive");
  }
  const std::size_t max_u = *std::max_element(cfg.windows.begin(), cfg.windows.end());
  const CivilDate first_day = by_day.begin()->first;
  const CivilDate last_day = by_day.rbegin()->first;
  const CivilDate first_evaluable = first_day.plus_days(static_cast<std::int32_t>(max_u));

  std::vector<CivilDate> eval_days = cfg.eval_days;
  if (eval_days.empty()) {
    for (CivilDate d = first_evaluable; d <= last_day; d = d.plus_days(1)) eval_days.push_back(d);
  }
  std::sort(eval_days.begin(), eval_days.end());
  eval_days.erase(std::unique(eval_days.begin(), eval_days.end()), eval_days.end());
  if (eval_days.empty() || eval_days.front() < first_evaluable) {
    throw Error(ErrorKind::precondition, "insufficient history for a " + std::to_string(max_u) +
                                             "-day window; first evaluable date is " + first_evaluable.to_string());
  }
  for (CivilDate d : eval_days) {
    if (!by_day.count(d)) throw Error(ErrorKind::data, "no trips for evaluation day " + d.to_string());
  }

  PipelineReport report;
  report.mode = cfg.match.mode;
  if (cfg.match.mode == MatchMode::dockless) {
    if (stations) {
      report.stations = *stations;
    } else {
      std::map<CivilDate, TripSet> history(by_day.begin(), by_day.lower_bound(eval_days.front()));
      report.stations = identify_virtual_stations(history, cfg.clustering);
    }
  }
  const VirtualStationSet* vs = report.stations ? &*report.stations : nullptr;
  DailyFleets fleets = daily_fleets(by_day, cfg.match, vs, cfg.jobs);
  report.days = std::move(fleets.days);
  report.profiles = std::move(fleets.profiles);

  std::vector<std::pair<CivilDate, std::size_t>> jobs_list;
  for (CivilDate d : eval_days) {
    for (std::size_t u : cfg.windows) jobs_list.emplace_back(d, u);
  }
  std::sort(jobs_list.begin(), jobs_list.end());
  report.rows.resize(jobs_list.size());
  parallel_for(jobs_list.size(), cfg.jobs, [&](std::size_t i) {
    const auto [day, u] = jobs_list[i];
    const TripSet& trips = by_day.at(day);
    const AllocationPlan plan = rolling_max_allocation(report.profiles, u, day);
    Evaluation ev;
    std::int64_t min_fleet = 0;
    if (cfg.match.mode == MatchMode::station) {
      const FleetSolution sol = build_min_fleet(trips, cfg.match);
      min_fleet = static_cast<std::int64_t>(sol.fleet_size());
      ev = unmet_ratio_station(sol, plan);
    } else {
      ev = simulate_dockless_day(trips, plan, *vs, cfg.match);
      for (const DaySummary& s : report.days) {
        if (s.day == day) min_fleet = s.min_fleet;
      }
    }
    const PlaceCounts final_counts = compute_final_distribution(plan, ev.sim.flows);
    PlaceCountMap observed;
    for (PlaceId p : ev.sim.final_places) ++observed[p];
    for (const auto& [p, n] : final_counts.at_end) {
      const auto it = observed.find(p);
      if ((it == observed.end() ? 0 : it->second) != n) {
        throw Error(ErrorKind::consistency, "final distribution at place " + std::to_string(p) + " on " +
                                                day.to_string() + " disagrees with the replay");
      }
    }
    if (static_cast<std::int64_t>(ev.sim.final_places.size()) != final_counts.total()) {
      throw Error(ErrorKind::consistency, "bike total changed during " + day.to_string());
    }
    const AllocationPlan next = rolling_max_allocation(report.profiles, u, day.plus_days(1));
    EvaluationRow& row = report.rows[i];
    row.date = day;
    row.u_days = u;
    row.recommended_fleet = plan.total();
    row.repositioning_next_day = compute_rebalancing(final_counts, next).total_moves;
    row.unmet_trip_ratio = ev.report.unmet_ratio;
    row.unmet_trips = ev.report.unmet_trips;
    row.total_trips = ev.report.total_trips;
    row.min_fleet = min_fleet;
    row.per_place_gap = std::move(ev.report.per_place_gap);
    row.plan = plan.allocation;
    row.final_counts = final_counts.at_end;
  });
  return report;
}

}  // namespace bikefleet
