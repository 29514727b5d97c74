// bikefleet: fleet sizing, allocation and rebalancing from bike-sharing trips.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include "bikefleet/allocator.hpp"
#include "bikefleet/csv.hpp"
#include "bikefleet/error.hpp"
#include "bikefleet/ingest.hpp"
#include "bikefleet/matcher.hpp"
#include "bikefleet/parallel.hpp"
#include "bikefleet/pipeline.hpp"
#include "bikefleet/report_io.hpp"
#include "bikefleet/scenarios.hpp"
#include "bikefleet/stats.hpp"
#include "bikefleet/synth.hpp"
#include "bikefleet/virtual_stations.hpp"

namespace fs = std::filesystem;
using namespace bikefleet;

namespace {

struct RunConfig {
  std::string config_file;
  std::string input;
  std::string registry;
  std::string stations;
  std::string out_dir = ".";
  std::string mode;  // empty: follow the input schema
  std::string bounds;
  double w_meters = 250.0;
  std::int64_t c_seconds = 0;
  std::size_t u_days = 7;
  std::uint64_t seed = 42;
  std::size_t jobs = 1;
  // clustering
  std::size_t k = 0;
  std::string k_grid = "10,20,30,40,50,60,70,80";
  double eps_meters = 250.0;
  std::size_t min_pts = 5;
  // allocate / rebalance
  std::string demand;
  std::string target;
  std::string final_counts;
  std::string plan;
  std::string day;
  // scenarios
  std::string c_list = "0,3600,21600";
  // synth
  SynthConfig synth;
  std::string synth_mode = "station";
  std::string start_date = "2020-01-06";
};

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : text) {
    if (ch == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (ch != ' ') {
      cur += ch;
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

template <class T>
std::vector<T> parse_int_list(const std::string& text, const char* what) {
  std::vector<T> out;
  for (const std::string& s : split_list(text)) {
    const auto v = csv::parse_int(s);
    if (!v || *v < 0) throw Error(ErrorKind::precondition, std::string("bad value in ") + what + ": '" + s + "'");
    out.push_back(static_cast<T>(*v));
  }
  return out;
}

CivilDate require_date(const std::string& text, const char* what) {
  const auto d = parse_date(text);
  if (!d) throw Error(ErrorKind::precondition, std::string("bad ") + what + " date '" + text + "'");
  return *d;
}

void write_file(const RunConfig& rc, const std::string& name, const std::string& content) {
  fs::create_directories(rc.out_dir);
  const fs::path path = fs::path(rc.out_dir) / name;
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::io, "cannot write " + path.string());
  out << content;
  if (!out) throw Error(ErrorKind::io, "failed writing " + path.string());
}

Bounds resolve_bounds(const RunConfig& rc) { return rc.bounds.empty() ? Bounds::world() : Bounds::parse(rc.bounds); }

Schema input_schema(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::io, "cannot open trip file: " + path);
  return detect_schema(in);
}

struct LoadedTrips {
  Schema schema;
  CleanResult clean;
  MatchMode mode;
};

LoadedTrips load(const RunConfig& rc) {
  if (rc.input.empty()) throw Error(ErrorKind::precondition, "--input is required");
  LoadedTrips lt{input_schema(rc.input), {}, MatchMode::station};
  std::optional<StationRegistry> reg;
  if (!rc.registry.empty()) reg = load_station_registry_file(rc.registry);
  lt.clean = load_trips_file(rc.input, resolve_bounds(rc), reg ? &*reg : nullptr);
  lt.mode = lt.schema == Schema::sbbs ? MatchMode::station : MatchMode::dockless;
  if (!rc.mode.empty()) {
    const auto m = parse_match_mode(rc.mode);
    if (!m) throw Error(ErrorKind::precondition, "unknown mode '" + rc.mode + "'");
    lt.mode = *m;
  }
  return lt;
}

MatchConfig match_config(const RunConfig& rc, MatchMode mode) {
  MatchConfig cfg;
  cfg.mode = mode;
  cfg.walk_radius_m = rc.w_meters;
  cfg.usage_interval_s = rc.c_seconds;
  cfg.validate();
  return cfg;
}

ClusteringParams clustering(const RunConfig& rc) {
  ClusteringParams p;
  p.eps_m = rc.eps_meters;
  p.min_pts = rc.min_pts;
  p.seed = rc.seed;
  if (rc.k > 0) {
    p.k = rc.k;
  } else {
    p.k_grid = parse_int_list<std::size_t>(rc.k_grid, "--k-grid");
  }
  return p;
}

std::optional<VirtualStationSet> stations_for(const RunConfig& rc, const std::map<CivilDate, TripSet>& history,
                                              MatchMode mode) {
  if (mode != MatchMode::dockless) return std::nullopt;
  if (!rc.stations.empty()) return load_virtual_stations_file(rc.stations);
  VirtualStationSet vs = identify_virtual_stations(history, clustering(rc));
  write_file(rc, "stations.json", vs.to_json());
  return vs;
}

// --- commands ---------------------------------------------------------------

void cmd_clean(const RunConfig& rc) {
  if (rc.input.empty()) throw Error(ErrorKind::precondition, "--input is required");
  const LoadedTrips lt = load(rc);
  std::ostringstream os;
  write_trips_csv(os, lt.clean.trips, lt.schema);
  write_file(rc, "cleaned.csv", os.str());
  write_file(rc, "cleaning_report.json", lt.clean.report.to_json());
  const CleaningReport& r = lt.clean.report;
  std::cout << "rows " << r.total_rows << ", kept " << r.kept << (r.empty_result ? " (empty result)" : "") << '\n';
}

void cmd_stations(const RunConfig& rc) {
  const LoadedTrips lt = load(rc);
  const VirtualStationSet vs = identify_virtual_stations(split_by_day(lt.clean.trips), clustering(rc));
  write_file(rc, "stations.json", vs.to_json());
  write_file(rc, "stations.csv", vs.to_csv());
  std::cout << "virtual stations " << vs.size() << '\n';
}

void cmd_minfleet(const RunConfig& rc) {
  const LoadedTrips lt = load(rc);
  const MatchConfig cfg = match_config(rc, lt.mode);
  const auto by_day = split_by_day(lt.clean.trips);
  const auto vs = stations_for(rc, by_day, lt.mode);
  std::vector<const TripSet*> days;
  for (const auto& [d, ts] : by_day) days.push_back(&ts);
  std::vector<FleetSolution> sols(days.size());
  parallel_for(days.size(), rc.jobs, [&](std::size_t i) { sols[i] = build_min_fleet(*days[i], cfg); });
  std::vector<DaySummary> summary;
  std::vector<DemandProfile> profiles;
  for (const FleetSolution& s : sols) {
    summary.push_back({s.day, static_cast<std::int64_t>(s.trips->size()), static_cast<std::int64_t>(s.fleet_size())});
    profiles.push_back(bike_demand_by_place(s, vs ? &*vs : nullptr));
    std::cout << s.day.to_string() << " fleet " << s.fleet_size() << '\n';
  }
  write_file(rc, "fleet.csv", report::fleet_csv(summary));
  write_file(rc, "demand.csv", report::demand_csv(profiles));
  write_file(rc, "solutions.json", report::solutions_json(sols));
}

void cmd_allocate(const RunConfig& rc) {
  if (rc.demand.empty()) throw Error(ErrorKind::precondition, "--demand is required");
  std::ifstream in(rc.demand);
  if (!in) throw Error(ErrorKind::io, "cannot open demand file: " + rc.demand);
  const std::vector<DemandProfile> history = report::read_demand_csv(in);
  if (history.empty()) throw Error(ErrorKind::precondition, "demand file has no rows");
  std::vector<CivilDate> targets;
  if (!rc.target.empty()) {
    targets.push_back(require_date(rc.target, "--target"));
  } else {
    for (CivilDate d = history.front().day.plus_days(static_cast<std::int32_t>(rc.u_days));
         d <= history.back().day.plus_days(1); d = d.plus_days(1)) {
      targets.push_back(d);
    }
  }
  std::string csv_out = "day,place_id,count\n";
  std::string json_out = "[\n";
  for (std::size_t i = 0; i < targets.size(); ++i) {
    const AllocationPlan plan = rolling_max_allocation(history, rc.u_days, targets[i]);
    csv_out += report::counts_csv(plan.for_day, plan.allocation, false);
    std::string j = report::plan_json(plan);
    j.pop_back();
    json_out += j + (i + 1 < targets.size() ? ",\n" : "\n");
    std::cout << plan.for_day.to_string() << " recommended " << plan.total() << '\n';
  }
  json_out += "]\n";
  write_file(rc, "allocation.csv", csv_out);
  write_file(rc, "allocation.json", json_out);
}

void cmd_rebalance(const RunConfig& rc) {
  if (rc.final_counts.empty() || rc.plan.empty() || rc.day.empty()) {
    throw Error(ErrorKind::precondition, "--final, --plan and --day are required");
  }
  const CivilDate day = require_date(rc.day, "--day");
  std::ifstream fin(rc.final_counts);
  if (!fin) throw Error(ErrorKind::io, "cannot open final distribution: " + rc.final_counts);
  std::ifstream pin(rc.plan);
  if (!pin) throw Error(ErrorKind::io, "cannot open plan: " + rc.plan);
  PlaceCounts final_today{day.plus_days(-1), report::read_counts_csv(fin, day.plus_days(-1))};
  AllocationPlan plan;
  plan.for_day = day;
  plan.allocation = report::read_counts_csv(pin, day);
  const RebalancingPlan rb = compute_rebalancing(final_today, plan);
  write_file(rc, "rebalancing.csv", report::counts_csv(day, rb.move_in));
  write_file(rc, "rebalancing.json", report::rebalancing_json(rb));
  std::cout << day.to_string() << " move-ins " << rb.total_moves << '\n';
}

void cmd_evaluate(const RunConfig& rc) {
  const LoadedTrips lt = load(rc);
  PipelineConfig pc;
  pc.match = match_config(rc, lt.mode);
  pc.windows = {1};
  if (rc.u_days != 1) pc.windows.push_back(rc.u_days);
  pc.clustering = clustering(rc);
  pc.jobs = rc.jobs;
  const auto by_day = split_by_day(lt.clean.trips);
  std::optional<VirtualStationSet> given;
  if (lt.mode == MatchMode::dockless && !rc.stations.empty()) given = load_virtual_stations_file(rc.stations);
  const PipelineReport rep = run_pipeline(by_day, pc, given ? &*given : nullptr);

  write_file(rc, "evaluation.csv", report::evaluation_csv(rep.rows));
  write_file(rc, "evaluation.json", report::evaluation_json(rep));
  write_file(rc, "fleet.csv", report::fleet_csv(rep.days));
  write_file(rc, "demand.csv", report::demand_csv(rep.profiles));
  if (rep.stations && !given) write_file(rc, "stations.json", rep.stations->to_json());
  for (std::size_t u : pc.windows) {
    std::string plan_csv = "day,place_id,count\n";
    std::string final_csv = "day,place_id,count\n";
    for (const EvaluationRow& r : rep.rows) {
      if (r.u_days != u) continue;
      plan_csv += report::counts_csv(r.date, r.plan, false);
      final_csv += report::counts_csv(r.date, r.final_counts, false);
    }
    write_file(rc, "allocation_u" + std::to_string(u) + ".csv", plan_csv);
    write_file(rc, "final_u" + std::to_string(u) + ".csv", final_csv);
  }
  if (rep.days.size() >= 2) {
    std::vector<double> trips, fleets;
    for (const DaySummary& d : rep.days) {
      trips.push_back(static_cast<double>(d.trips));
      fleets.push_back(static_cast<double>(d.min_fleet));
    }
    try {
      write_file(rc, "stats.json", report::stats_json(summary_stats_daily(trips, fleets)));
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::precondition) throw;
      std::cerr << "warning: statistics skipped: " << e.what() << '\n';
    }
  }
  for (std::size_t u : pc.windows) {
    std::cout << "u=" << u << " mean unmet ratio " << csv::format_fixed(rep.mean_unmet_ratio(u), 4) << '\n';
  }
}

void cmd_distancing(const RunConfig& rc) {
  const LoadedTrips lt = load(rc);
  const MatchConfig cfg = match_config(rc, lt.mode);
  const auto c_values = parse_int_list<Timestamp>(rc.c_list, "--c-list");
  std::string csv_out;
  std::ostringstream json_out;
  json_out << "[\n";
  bool first = true;
  for (const auto& [day, trips] : split_by_day(lt.clean.trips)) {
    if (!rc.day.empty() && day != require_date(rc.day, "--day")) continue;
    const auto rows = sweep_usage_interval(trips, cfg, c_values, rc.jobs);
    csv_out += report::sweep_csv(day, rows, csv_out.empty());
    for (const SweepRow& r : rows) {
      json_out << (first ? "" : ",\n") << "  {\"day\": \"" << day.to_string() << "\", \"c_seconds\": " << r.c
               << ", \"fleet_size\": " << r.fleet_size
               << ", \"relative_increase\": " << csv::format_shortest(r.relative_increase) << "}";
      first = false;
      std::cout << day.to_string() << " c=" << r.c << " fleet " << r.fleet_size << '\n';
    }
  }
  json_out << "\n]\n";
  if (csv_out.empty()) csv_out = "day,c_seconds,fleet_size,relative_increase\n";
  write_file(rc, "sweep.csv", csv_out);
  write_file(rc, "sweep.json", json_out.str());
}

void cmd_platform(const RunConfig& rc) {
  const LoadedTrips lt = load(rc);
  const MatchConfig cfg = match_config(rc, lt.mode);
  std::vector<PlatformComparison> rows;
  for (const auto& [day, trips] : split_by_day(lt.clean.trips)) {
    if (!rc.day.empty() && day != require_date(rc.day, "--day")) continue;
    rows.push_back(compare_platforms(trips, cfg, rc.jobs));
    const PlatformComparison& r = rows.back();
    if (!r.warning.empty()) std::cerr << "warning: " << day.to_string() << ": " << r.warning << '\n';
    std::cout << day.to_string() << " separate " << r.sum_fleet << " merged " << r.merged_fleet << '\n';
  }
  write_file(rc, "platform.csv", report::platform_csv(rows));
  write_file(rc, "platform.json", report::platform_json(rows));
}

void cmd_synth(RunConfig rc) {
  SynthConfig sc = rc.synth;
  const auto m = parse_match_mode(rc.synth_mode);
  if (!m) throw Error(ErrorKind::precondition, "unknown mode '" + rc.synth_mode + "'");
  sc.mode = *m;
  sc.seed = rc.seed;
  sc.start_date = require_date(rc.start_date, "--start-date");
  if (!rc.bounds.empty()) sc.bbox = Bounds::parse(rc.bounds);
  const SynthData data = generate_trips(sc);
  std::ostringstream trips, reg;
  write_trips_csv(trips, data.trips, sc.mode == MatchMode::station ? Schema::sbbs : Schema::dbs);
  write_station_registry(reg, data.places);
  write_file(rc, "trips.csv", trips.str());
  write_file(rc, "stations.csv", reg.str());
  write_file(rc, "synth_config.json", sc.to_json());
  std::cout << "trips " << data.trips.size() << '\n';
}

// --- option plumbing ---------------------------------------------------------

void add_common(CLI::App* sub, RunConfig& rc) {
  sub->add_option("--config", rc.config_file, "key=value file; flags override it");
  sub->add_option("--out-dir", rc.out_dir, "output directory")->capture_default_str();
  sub->add_option("--seed", rc.seed, "root seed")->capture_default_str();
  sub->add_option("--jobs", rc.jobs, "worker threads (0 = all cores)")->capture_default_str();
}

void add_input(CLI::App* sub, RunConfig& rc) {
  sub->add_option("--input", rc.input, "trip CSV (sbbs or dbs schema)");
  sub->add_option("--registry", rc.registry, "station registry CSV");
  sub->add_option("--bounds", rc.bounds, "min_lat,min_lon,max_lat,max_lon");
}

void add_match(CLI::App* sub, RunConfig& rc) {
  sub->add_option("--mode", rc.mode, "station|dockless (default: from input schema)");
  sub->add_option("--w-meters", rc.w_meters, "walking radius")->capture_default_str();
  sub->add_option("--c-seconds", rc.c_seconds, "usage interval")->capture_default_str();
}

void add_clustering(CLI::App* sub, RunConfig& rc) {
  sub->add_option("--stations", rc.stations, "virtual stations JSON (dockless)");
  sub->add_option("--k", rc.k, "fixed cluster count (0 = elbow over --k-grid)")->capture_default_str();
  sub->add_option("--k-grid", rc.k_grid, "ascending cluster counts for the elbow")->capture_default_str();
  sub->add_option("--eps-meters", rc.eps_meters, "DBSCAN radius")->capture_default_str();
  sub->add_option("--min-pts", rc.min_pts, "DBSCAN core threshold")->capture_default_str();
}

std::string normalize_key(std::string key) {
  for (char& ch : key) {
    if (ch == '_') ch = '-';
  }
  return "--" + key;
}

/// Fills options absent from the command line from a key=value file.
void apply_config_file(CLI::App* sub, const std::string& path, const std::set<std::string>& known) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::io, "cannot open config file: " + path);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos || line[first] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw Error(ErrorKind::schema, path + ":" + std::to_string(line_no) + ": expected key=value");
    }
    auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t");
      const auto e = s.find_last_not_of(" \t");
      return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
    };
    const std::string name = normalize_key(trim(line.substr(0, eq)));
    const std::string value = trim(line.substr(eq + 1));
    if (!known.count(name)) {
      throw Error(ErrorKind::schema, path + ":" + std::to_string(line_no) + ": unknown key " + name.substr(2));
    }
    CLI::Option* opt = sub->get_option_no_throw(name);
    if (opt == nullptr || opt->count() > 0) continue;  // other command's key, or overridden by a flag
    opt->add_result(value);
    opt->run_callback();
  }
}

std::string resolved_config(const CLI::App* sub) {
  std::string out = "# resolved configuration for " + sub->get_name() + "\n";
  for (const CLI::Option* opt : sub->get_options()) {
    const std::string name = opt->get_single_name();
    if (name == "help" || name == "config" || opt->get_lnames().empty()) continue;
    std::string value;
    if (opt->count() > 0) {
      for (const std::string& r : opt->results()) value += (value.empty() ? "" : ",") + r;
    } else {
      value = opt->get_default_str();
    }
    out += name + "=" + value + "\n";
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"bikefleet: minimum fleet, allocation and rebalancing for bike-sharing trips"};
  app.require_subcommand(1);
  RunConfig rc;

  auto* clean = app.add_subcommand("clean", "drop defective trips and report the counts");
  add_common(clean, rc);
  add_input(clean, rc);

  auto* stations = app.add_subcommand("stations", "identify dockless virtual stations");
  add_common(stations, rc);
  add_input(stations, rc);
  add_clustering(stations, rc);

  auto* minfleet = app.add_subcommand("minfleet", "minimum fleet and bike demand per day");
  add_common(minfleet, rc);
  add_input(minfleet, rc);
  add_match(minfleet, rc);
  add_clustering(minfleet, rc);

  auto* allocate = app.add_subcommand("allocate", "next-day allocation from the rolling demand maximum");
  add_common(allocate, rc);
  allocate->add_option("--demand", rc.demand, "demand CSV (day,place_id,bike_demand)");
  allocate->add_option("--u-days", rc.u_days, "history window")->capture_default_str();
  allocate->add_option("--target", rc.target, "plan day (default: every day with full history)");

  auto* rebalance = app.add_subcommand("rebalance", "midnight move-ins from a final distribution to a plan");
  add_common(rebalance, rc);
  rebalance->add_option("--final", rc.final_counts, "final distribution CSV (day,place_id,count)");
  rebalance->add_option("--plan", rc.plan, "next-day plan CSV (day,place_id,count)");
  rebalance->add_option("--day", rc.day, "plan day; the final distribution is read for the day before");

  auto* evaluate = app.add_subcommand("evaluate", "unmet trip ratio and repositioning per day for u=1 and u");
  add_common(evaluate, rc);
  add_input(evaluate, rc);
  add_match(evaluate, rc);
  add_clustering(evaluate, rc);
  evaluate->add_option("--u-days", rc.u_days, "history window")->capture_default_str();

  auto* scenario = app.add_subcommand("scenario", "sensitivity analyses");
  scenario->require_subcommand(1);
  auto* distancing = scenario->add_subcommand("distancing", "fleet size across usage intervals");
  add_common(distancing, rc);
  add_input(distancing, rc);
  add_match(distancing, rc);
  distancing->add_option("--c-list", rc.c_list, "usage intervals in seconds")->capture_default_str();
  distancing->add_option("--day", rc.day, "only this day");
  auto* platform = scenario->add_subcommand("platform", "separate companies vs one platform");
  add_common(platform, rc);
  add_input(platform, rc);
  add_match(platform, rc);
  platform->add_option("--day", rc.day, "only this day");

  auto* synth = app.add_subcommand("synth", "seeded synthetic trips");
  add_common(synth, rc);
  synth->add_option("--mode", rc.synth_mode, "station|dockless")->capture_default_str();
  synth->add_option("--bounds", rc.bounds, "bbox min_lat,min_lon,max_lat,max_lon");
  synth->add_option("--n-places", rc.synth.n_places)->capture_default_str();
  synth->add_option("--days", rc.synth.days)->capture_default_str();
  synth->add_option("--start-date", rc.start_date)->capture_default_str();
  synth->add_option("--base-trips", rc.synth.base_daily_trips)->capture_default_str();
  synth->add_option("--weekday-factor", rc.synth.weekday_factor)->capture_default_str();
  synth->add_option("--weekend-factor", rc.synth.weekend_factor)->capture_default_str();
  synth->add_option("--noise-cv", rc.synth.daily_noise_cv)->capture_default_str();
  synth->add_option("--duration-mean", rc.synth.duration_mean_s)->capture_default_str();
  synth->add_option("--duration-spread", rc.synth.duration_spread)->capture_default_str();
  synth->add_option("--od-concentration", rc.synth.od_concentration)->capture_default_str();
  synth->add_option("--jitter-meters", rc.synth.dockless_jitter_m)->capture_default_str();
  synth->add_option("--companies", rc.synth.n_companies)->capture_default_str();

  const std::vector<CLI::App*> leaves{clean, stations, minfleet, allocate, rebalance, evaluate, distancing, platform,
                                      synth};
  std::set<std::string> known;
  for (const CLI::App* leaf : leaves) {
    for (const CLI::Option* opt : leaf->get_options()) {
      for (const std::string& n : opt->get_lnames()) known.insert("--" + n);
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return exit_code(ErrorKind::precondition);
  }

  try {
    CLI::App* leaf = nullptr;
    for (CLI::App* l : leaves) {
      if (l->parsed()) leaf = l;
    }
    if (!rc.config_file.empty()) apply_config_file(leaf, rc.config_file, known);
    write_file(rc, leaf->get_name() + "_config.txt", resolved_config(leaf));
    if (leaf == clean) cmd_clean(rc);
    else if (leaf == stations) cmd_stations(rc);
    else if (leaf == minfleet) cmd_minfleet(rc);
    else if (leaf == allocate) cmd_allocate(rc);
    else if (leaf == rebalance) cmd_rebalance(rc);
    else if (leaf == evaluate) cmd_evaluate(rc);
    else if (leaf == distancing) cmd_distancing(rc);
    else if (leaf == platform) cmd_platform(rc);
    else if (leaf == synth) cmd_synth(rc);
  } catch (const Error& e) {
    std::cerr << "error (" << to_string(e.kind()) << "): " << e.what() << '\n';
    return exit_code(e.kind());
  } catch (const CLI::ParseError& e) {
    std::cerr << "error (config): " << e.what() << '\n';
    return exit_code(ErrorKind::precondition);
  } catch (const std::exception& e) {
    std::cerr << "error (internal): " << e.what() << '\n';
    return exit_code(ErrorKind::consistency);
  }
  return 0;
}
