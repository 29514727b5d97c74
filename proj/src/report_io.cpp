#include "bikefleet/report_io.hpp"

#include <istream>
#include <sstream>

#include <json.hpp>

#include "bikefleet/csv.hpp"
#include "bikefleet/error.hpp"

namespace bikefleet::report {
namespace {

using nlohmann::ordered_json;

ordered_json place_json(const PlaceRef& p) {
  if (p.is_station()) return p.station_id();
  return ordered_json::array({p.point().lat, p.point().lon});
}

ordered_json counts_json(const PlaceCountMap& m) {
  ordered_json out = ordered_json::array();
  for (const auto& [p, v] : m) out.push_back({{"place_id", p}, {"count", v}});
  return out;
}

CivilDate require_date(const std::string& text, std::size_t line) {
  const auto d = parse_date(text);
  if (!d) throw Error(ErrorKind::data, "line " + std::to_string(line) + ": bad date '" + text + "'");
  return *d;
}

long long require_int(const std::string& text, std::size_t line) {
  const auto v = csv::parse_int(text);
  if (!v) throw Error(ErrorKind::data, "line " + std::to_string(line) + ": bad integer '" + text + "'");
  return *v;
}

void expect_header(std::istream& in, std::vector<std::string>& f, std::size_t& line,
                   const std::vector<std::string>& want) {
  if (!csv::read_record(in, f, line) || f != want) {
    std::string joined;
    for (const auto& w : want) joined += (joined.empty() ? "" : ",") + w;
    throw Error(ErrorKind::schema, "expected header " + joined);
  }
}

}  // namespace

std::string demand_csv(const std::vector<DemandProfile>& profiles) {
  std::ostringstream os;
  os << "day,place_id,bike_demand\n";
  for (const DemandProfile& p : profiles) {
    for (const auto& [place, n] : p.demand) os << p.day.to_string() << ',' << place << ',' << n << '\n';
  }
  return os.str();
}

std::vector<DemandProfile> read_demand_csv(std::istream& in) {
  std::vector<std::string> f;
  std::size_t line = 0;
  expect_header(in, f, line, {"day", "place_id", "bike_demand"});
  std::map<CivilDate, DemandProfile> by_day;
  while (csv::read_record(in, f, line)) {
    if (f.size() != 3) throw Error(ErrorKind::data, "line " + std::to_string(line) + ": expected 3 fields");
    const CivilDate day = require_date(f[0], line);
    DemandProfile& p = by_day[day];
    p.day = day;
    p.demand[require_int(f[1], line)] += require_int(f[2], line);
  }
  std::vector<DemandProfile> out;
  for (auto& [d, p] : by_day) out.push_back(std::move(p));
  return out;
}

std::string solutions_json(const std::vector<FleetSolution>& solutions) {
  ordered_json days = ordered_json::array();
  for (const FleetSolution& s : solutions) {
    ordered_json d;
    d["day"] = s.day.to_string();
    d["mode"] = to_string(s.config.mode);
    d["w_meters"] = s.config.walk_radius_m;
    d["c_seconds"] = s.config.usage_interval_s;
    d["fleet_size"] = s.fleet_size();
    ordered_json chains = ordered_json::array();
    for (const BikeChain& c : s.chains) {
      chains.push_back({{"bike", c.bike_ord},
                        {"initial_place", place_json(c.initial_place)},
                        {"final_place", place_json(c.final_place)},
                        {"trips", c.trip_ids}});
    }
    d["chains"] = std::move(chains);
    days.push_back(std::move(d));
  }
  return days.dump(1) + "\n";
}

std::string fleet_csv(const std::vector<DaySummary>& days) {
  std::ostringstream os;
  os << "day,trips,fleet_size\n";
  for (const DaySummary& d : days) os << d.day.to_string() << ',' << d.trips << ',' << d.min_fleet << '\n';
  return os.str();
}

std::string counts_csv(const CivilDate& day, const PlaceCountMap& counts, bool header) {
  std::ostringstream os;
  if (header) os << "day,place_id,count\n";
  for (const auto& [p, v] : counts) os << day.to_string() << ',' << p << ',' << v << '\n';
  return os.str();
}

PlaceCountMap read_counts_csv(std::istream& in, std::optional<CivilDate> day) {
  std::vector<std::string> f;
  std::size_t line = 0;
  expect_header(in, f, line, {"day", "place_id", "count"});
  PlaceCountMap out;
  while (csv::read_record(in, f, line)) {
    if (f.size() != 3) throw Error(ErrorKind::data, "line " + std::to_string(line) + ": expected 3 fields");
    if (day && require_date(f[0], line) != *day) continue;
    out[require_int(f[1], line)] += require_int(f[2], line);
  }
  return out;
}

std::string plan_json(const AllocationPlan& plan) {
  ordered_json j;
  j["for_day"] = plan.for_day.to_string();
  j["window_u"] = plan.window_u;
  ordered_json src = ordered_json::array();
  for (const CivilDate& d : plan.source_days) src.push_back(d.to_string());
  j["source_days"] = std::move(src);
  j["recommended_fleet"] = plan.total();
  j["allocation"] = counts_json(plan.allocation);
  return j.dump(2) + "\n";
}

std::string rebalancing_json(const RebalancingPlan& plan) {
  ordered_json j;
  j["for_day"] = plan.for_day.to_string();
  j["total_moves"] = plan.total_moves;
  j["move_in"] = counts_json(plan.move_in);
  return j.dump(2) + "\n";
}

std::string evaluation_csv(const std::vector<EvaluationRow>& rows) {
  std::ostringstream os;
  os << "date,u_days,recommended_fleet,repositioning_next_day,unmet_trip_ratio\n";
  for (const EvaluationRow& r : rows) {
    os << r.date.to_string() << ',' << r.u_days << ',' << r.recommended_fleet << ',' << r.repositioning_next_day
       << ',' << csv::format_fixed(r.unmet_trip_ratio, 6) << '\n';
  }
  return os.str();
}

std::string stats_json(const SeriesStats& st) {
  ordered_json j;
  j["n"] = st.n;
  j["mean"] = st.mean;
  j["cv"] = st.cv;
  if (st.pearson_r) j["pearson_r"] = *st.pearson_r;
  if (st.r_squared) j["r_squared"] = *st.r_squared;
  ordered_json lags = ordered_json::object();
  for (const auto& [k, v] : st.rrmse_lag) lags[std::to_string(k)] = v;
  j["rrmse_lag"] = std::move(lags);
  return j.dump(2) + "\n";
}

std::string evaluation_json(const PipelineReport& report) {
  ordered_json j;
  j["mode"] = to_string(report.mode);
  ordered_json days = ordered_json::array();
  for (const DaySummary& d : report.days) {
    days.push_back({{"day", d.day.to_string()}, {"trips", d.trips}, {"min_fleet", d.min_fleet}});
  }
  j["days"] = std::move(days);
  ordered_json rows = ordered_json::array();
  for (const EvaluationRow& r : report.rows) {
    ordered_json gaps = ordered_json::array();
    for (const auto& [p, g] : r.per_place_gap) gaps.push_back({{"place_id", p}, {"gap", g}});
    rows.push_back({{"date", r.date.to_string()},
                    {"u_days", r.u_days},
                    {"recommended_fleet", r.recommended_fleet},
                    {"repositioning_next_day", r.repositioning_next_day},
                    {"total_trips", r.total_trips},
                    {"unmet_trips", r.unmet_trips},
                    {"unmet_trip_ratio", r.unmet_trip_ratio},
                    {"min_fleet", r.min_fleet},
                    {"per_place_gap", std::move(gaps)}});
  }
  j["rows"] = std::move(rows);
  ordered_json means = ordered_json::object();
  for (const EvaluationRow& r : report.rows) {
    const std::string key = std::to_string(r.u_days);
    if (!means.contains(key)) means[key] = report.mean_unmet_ratio(r.u_days);
  }
  j["mean_unmet_ratio"] = std::move(means);
  return j.dump(2) + "\n";
}

std::string sweep_csv(const CivilDate& day, const std::vector<SweepRow>& rows, bool header) {
  std::ostringstream os;
  if (header) os << "day,c_seconds,fleet_size,relative_increase\n";
  for (const SweepRow& r : rows) {
    os << day.to_string() << ',' << r.c << ',' << r.fleet_size << ',' << csv::format_fixed(r.relative_increase, 6)
       << '\n';
  }
  return os.str();
}

std::string platform_csv(const std::vector<PlatformComparison>& rows) {
  std::ostringstream os;
  os << "day,company_id,trips,fleet_size,turnover\n";
  for (const PlatformComparison& r : rows) {
    std::size_t trips = 0;
    for (const auto& [id, cf] : r.per_company) {
      os << r.day.to_string() << ',' << id << ',' << cf.trips << ',' << cf.fleet_size << ','
         << csv::format_fixed(cf.turnover, 4) << '\n';
      trips += cf.trips;
    }
    const double turnover = r.merged_fleet == 0 ? 0.0 : static_cast<double>(trips) / static_cast<double>(r.merged_fleet);
    os << r.day.to_string() << ",all," << trips << ',' << r.merged_fleet << ',' << csv::format_fixed(turnover, 4)
       << '\n';
  }
  return os.str();
}

std::string platform_json(const std::vector<PlatformComparison>& rows) {
  ordered_json out = ordered_json::array();
  for (const PlatformComparison& r : rows) {
    ordered_json companies = ordered_json::array();
    for (const auto& [id, cf] : r.per_company) {
      companies.push_back(
          {{"company_id", id}, {"trips", cf.trips}, {"fleet_size", cf.fleet_size}, {"turnover", cf.turnover}});
    }
    ordered_json j;
    j["day"] = r.day.to_string();
    j["window_days"] = r.window_days;
    j["companies"] = std::move(companies);
    j["sum_fleet"] = r.sum_fleet;
    j["merged_fleet"] = r.merged_fleet;
    j["reduction_vs_sum"] = r.reduction_vs_sum;
    if (!r.warning.empty()) j["warning"] = r.warning;
    out.push_back(std::move(j));
  }
  return out.dump(2) + "\n";
}

}  // namespace bikefleet::report
