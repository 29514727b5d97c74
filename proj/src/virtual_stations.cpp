#include "bikefleet/virtual_stations.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "bikefleet/cluster.hpp"
#include "bikefleet/csv.hpp"
#include "bikefleet/error.hpp"

namespace bikefleet {

VirtualStationSet::VirtualStationSet(std::vector<GeoPoint> centers, double service_radius_m,
                                     ClusteringParams params)
    : params_(std::move(params)) {
  std::set<std::pair<double, double>> seen;
  for (std::size_t i = 0; i < centers.size(); ++i) {
    if (!seen.insert({centers[i].lat, centers[i].lon}).second) {
      throw Error(ErrorKind::precondition, "virtual station centers must be distinct");
    }
    stations_.push_back(VirtualStation{static_cast<PlaceId>(i), centers[i], service_radius_m});
    cart_.push_back(centers[i]);
  }
  index_ = GridIndex::build(centers, service_radius_m > 0 ? service_radius_m : kServiceRadiusM);
  params_.service_radius_m = service_radius_m;
}

std::string VirtualStationSet::to_json() const {
  nlohmann::ordered_json j;
  nlohmann::ordered_json p;
  p["eps_m"] = params_.eps_m;
  p["min_pts"] = params_.min_pts;
  if (params_.k) p["k"] = *params_.k;
  p["k_grid"] = params_.k_grid;
  p["service_radius_m"] = params_.service_radius_m;
  p["seed"] = params_.seed;
  if (params_.source_day) p["source_day"] = params_.source_day->to_string();
  p["origins"] = params_.origins;
  p["noise_points"] = params_.noise_points;
  p["k_used"] = params_.k_used;
  j["params"] = p;
  nlohmann::ordered_json list = nlohmann::ordered_json::array();
  for (const VirtualStation& s : stations_) {
    list.push_back({{"vs_id", s.vs_id}, {"lat", s.center.lat}, {"lon", s.center.lon}, {"radius", s.service_radius_m}});
  }
  j["stations"] = list;
  return j.dump(2) + "\n";
}

std::string VirtualStationSet::to_csv() const {
  std::ostringstream os;
  os << "vs_id,lat,lon,radius_m\n";
  for (const VirtualStation& s : stations_) {
    os << s.vs_id << ',' << csv::format_shortest(s.center.lat) << ',' << csv::format_shortest(s.center.lon) << ','
       << csv::format_shortest(s.service_radius_m) << '\n';
  }
  return os.str();
}

VirtualStationSet VirtualStationSet::from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::schema, std::string("virtual station file is not valid JSON: ") + e.what());
  }
  if (!j.contains("stations") || !j["stations"].is_array()) {
    throw Error(ErrorKind::schema, "virtual station file lacks a stations array");
  }
  ClusteringParams params;
  if (j.contains("params")) {
    const auto& p = j["params"];
    params.eps_m = p.value("eps_m", params.eps_m);
    params.min_pts = p.value("min_pts", params.min_pts);
    if (p.contains("k")) params.k = p["k"].get<std::size_t>();
    params.k_grid = p.value("k_grid", std::vector<std::size_t>{});
    params.seed = p.value("seed", std::uint64_t{0});
    if (p.contains("source_day")) params.source_day = parse_date(p["source_day"].get<std::string>());
    params.origins = p.value("origins", std::size_t{0});
    params.noise_points = p.value("noise_points", std::size_t{0});
    params.k_used = p.value("k_used", std::size_t{0});
  }
  std::vector<std::pair<PlaceId, GeoPoint>> rows;
  double radius = kServiceRadiusM;
  try {
    for (const auto& s : j["stations"]) {
      rows.emplace_back(s.at("vs_id").get<PlaceId>(), GeoPoint{s.at("lat").get<double>(), s.at("lon").get<double>()});
      radius = s.value("radius", radius);
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::schema, std::string("malformed station entry: ") + e.what());
  }
  std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<GeoPoint> centers;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].first != static_cast<PlaceId>(i)) {
      throw Error(ErrorKind::schema, "virtual station ids must be contiguous from 0");
    }
    centers.push_back(rows[i].second);
  }
  return VirtualStationSet(std::move(centers), radius, params);
}

PlaceAssignment assign_place(GeoPoint p, const VirtualStationSet& stations) {
  if (stations.empty()) throw Error(ErrorKind::precondition, "cannot assign a place: no virtual stations");
  const simd::Query q = to_cartesian(p);
  const simd::KernelTable& kernels = simd::active_kernels();
  const simd::Top2 top = kernels.argmin2(q, stations.cartesian().view());
  std::size_t best = top.index;
  double best_d = haversine_m(p, stations.stations()[best].center);
  const double limit = top.best + top.best * 1e-9 + 1e-6;
  if (top.second <= limit) {
    std::vector<double> scratch(stations.size());
    kernels.chord2(q, stations.cartesian().view(), scratch.data());
    for (std::size_t c = 0; c < scratch.size(); ++c) {
      if (scratch[c] > limit || c == top.index) continue;
      const double d = haversine_m(p, stations.stations()[c].center);
      if (d < best_d || (d == best_d && c < best)) {
        best = c;
        best_d = d;
      }
    }
  }
  const VirtualStation& vs = stations.stations()[best];
  return PlaceAssignment{vs.vs_id, best_d, best_d < vs.service_radius_m};
}

VirtualStationSet identify_virtual_stations(const std::map<CivilDate, TripSet>& history, ClusteringParams params) {
  if (history.empty()) throw Error(ErrorKind::precondition, "station identification needs at least one day of trips");
  auto busiest = history.begin();
  for (auto it = history.begin(); it != history.end(); ++it) {
    if (it->second.size() > busiest->second.size()) busiest = it;
  }
  std::vector<GeoPoint> origins;
  origins.reserve(busiest->second.size());
  for (const Trip& t : busiest->second.trips()) {
    if (!t.origin.is_coordinate()) {
      throw Error(ErrorKind::precondition, "virtual stations need coordinate (dockless) trip origins");
    }
    origins.push_back(t.origin.point());
  }

  const DbscanResult db = dbscan(origins, params.eps_m, params.min_pts);
  std::vector<GeoPoint> kept;
  for (std::size_t i = 0; i < origins.size(); ++i) {
    if (db.labels[i] != kNoise) kept.push_back(origins[i]);
  }
  params.source_day = busiest->first;
  params.origins = origins.size();
  params.noise_points = origins.size() - kept.size();
  if (kept.empty()) {
    throw Error(ErrorKind::precondition,
                "every origin on " + busiest->first.to_string() + " is noise; no virtual stations identifiable");
  }

  std::size_t k = 0;
  if (params.k) {
    k = *params.k;
  } else if (!params.k_grid.empty()) {
    std::vector<std::size_t> grid;
    for (std::size_t g : params.k_grid) {
      if (g >= 1 && g <= kept.size()) grid.push_back(g);
    }
    k = elbow_select_k(kept, grid, params.seed, params.service_radius_m).k;
  } else {
    throw Error(ErrorKind::precondition, "station identification needs k or a k grid");
  }
  if (k > kept.size()) {
    throw Error(ErrorKind::precondition, "k=" + std::to_string(k) + " exceeds the " + std::to_string(kept.size()) +
                                             " non-noise origins");
  }
  params.k_used = k;
  const KMeansResult km = kmeans(kept, k, params.seed);

  std::vector<GeoPoint> centers;
  std::set<std::pair<double, double>> seen;
  for (const GeoPoint& c : km.centers) {
    if (seen.insert({c.lat, c.lon}).second) centers.push_back(c);
  }
  const double radius = params.service_radius_m;
  return VirtualStationSet(std::move(centers), radius, std::move(params));
}

VirtualStationSet load_virtual_stations_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::io, "cannot open virtual station file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return VirtualStationSet::from_json(ss.str());
}

}  // namespace bikefleet
