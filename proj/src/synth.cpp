#include "bikefleet/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <json.hpp>

#include "bikefleet/error.hpp"
#include "bikefleet/geo.hpp"
#include "bikefleet/rng.hpp"

namespace bikefleet {
namespace {

constexpr std::uint64_t kPlaceStream = 1u << 20;

/// Cumulative Zipf weights over a random permutation of the places.
std::vector<double> popularity(std::size_t n, double s, Rng& rng) {
  std::vector<std::size_t> rank(n);
  for (std::size_t i = 0; i < n; ++i) rank[i] = i;
  for (std::size_t i = n; i > 1; --i) std::swap(rank[i - 1], rank[rng.below(i)]);
  std::vector<double> cum(n);
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    acc += 1.0 / std::pow(static_cast<double>(rank[i] + 1), s);
    cum[i] = acc;
  }
  for (double& c : cum) c /= acc;
  return cum;
}

std::size_t draw(const std::vector<double>& cum, Rng& rng) {
  const auto it = std::upper_bound(cum.begin(), cum.end(), rng.uniform());
  return std::min<std::size_t>(static_cast<std::size_t>(it - cum.begin()), cum.size() - 1);
}

GeoPoint jitter(GeoPoint anchor, double radius_m, const Bounds& box, Rng& rng) {
  if (radius_m <= 0.0) return anchor;
  const double r = radius_m * std::sqrt(rng.uniform());
  const double theta = rng.uniform(0.0, 2.0 * std::numbers::pi);
  const double m_per_deg = deg_to_rad(1.0) * kEarthRadiusM;
  GeoPoint p{anchor.lat + r * std::sin(theta) / m_per_deg,
             anchor.lon + r * std::cos(theta) / (m_per_deg * std::cos(deg_to_rad(anchor.lat)))};
  p.lat = std::clamp(p.lat, box.min_lat, box.max_lat);
  p.lon = std::clamp(p.lon, box.min_lon, box.max_lon);
  return p;
}

Timestamp draw_start(Rng& rng) {
  const double pick = rng.uniform();
  double h;
  if (pick < 0.35) {
    h = 8.0 + 1.0 * rng.normal();
  } else if (pick < 0.70) {
    h = 18.0 + 1.5 * rng.normal();
  } else {
    h = rng.uniform(6.0, 23.0);
  }
  h = std::clamp(h, 0.0, 23.99);
  return static_cast<Timestamp>(h * 3600.0);
}

}  // namespace

void SynthConfig::validate() const {
  auto fail = [](const std::string& what) { throw Error(ErrorKind::precondition, "synth config: " + what); };
  if (n_places == 0) fail("n_places must be positive");
  if (days == 0) fail("days must be positive");
  if (!(base_daily_trips >= 0.0)) fail("base_daily_trips must be non-negative");
  if (!(weekday_factor > 0.0) || !(weekend_factor > 0.0)) fail("day-of-week factors must be positive");
  if (!(daily_noise_cv >= 0.0) || !(duration_spread >= 0.0)) fail("noise parameters must be non-negative");
  if (!(duration_mean_s > 0.0)) fail("duration_mean must be positive");
  if (!(dockless_jitter_m >= 0.0)) fail("dockless_jitter must be non-negative");
  if (n_companies == 0) fail("n_companies must be positive");
  if (bbox.degenerate()) fail("bbox is degenerate");
}

std::string SynthConfig::to_json() const {
  nlohmann::ordered_json j;
  j["n_places"] = n_places;
  j["bbox"] = bbox.to_string();
  j["days"] = days;
  j["start_date"] = start_date.to_string();
  j["base_daily_trips"] = base_daily_trips;
  j["weekday_factor"] = weekday_factor;
  j["weekend_factor"] = weekend_factor;
  j["daily_noise_cv"] = daily_noise_cv;
  j["duration_mean_s"] = duration_mean_s;
  j["duration_spread"] = duration_spread;
  j["od_concentration"] = od_concentration;
  j["mode"] = to_string(mode);
  j["dockless_jitter_m"] = dockless_jitter_m;
  j["n_companies"] = n_companies;
  j["seed"] = seed;
  return j.dump(2) + "\n";
}

SynthData generate_trips(const SynthConfig& cfg) {
  cfg.validate();
  SynthData out;
  Rng place_rng(derive_seed(cfg.seed, kPlaceStream));
  // Keep anchors far enough inside the box that jitter rarely needs clamping.
  const double m_per_deg = deg_to_rad(1.0) * kEarthRadiusM;
  const double margin = cfg.mode == MatchMode::dockless ? cfg.dockless_jitter_m : 0.0;
  const double mlat = std::min(margin / m_per_deg, 0.25 * (cfg.bbox.max_lat - cfg.bbox.min_lat));
  const double mlon = std::min(margin / (m_per_deg * std::cos(deg_to_rad(cfg.bbox.min_lat))),
                               0.25 * (cfg.bbox.max_lon - cfg.bbox.min_lon));
  std::vector<GeoPoint> anchors(cfg.n_places);
  for (std::size_t i = 0; i < cfg.n_places; ++i) {
    anchors[i] = {place_rng.uniform(cfg.bbox.min_lat + mlat, cfg.bbox.max_lat - mlat),
                  place_rng.uniform(cfg.bbox.min_lon + mlon, cfg.bbox.max_lon - mlon)};
    out.places[static_cast<StationId>(i)] = {static_cast<StationId>(i), "place-" + std::to_string(i), anchors[i]};
  }
  // Residential and workplace popularity differ, which makes commute flows
  // directional.
  const std::vector<double> home = popularity(cfg.n_places, cfg.od_concentration, place_rng);
  const std::vector<double> work = popularity(cfg.n_places, cfg.od_concentration, place_rng);

  std::vector<Trip> trips;
  for (std::size_t d = 0; d < cfg.days; ++d) {
    Rng rng(derive_seed(cfg.seed, d));
    const CivilDate day = cfg.start_date.plus_days(static_cast<std::int32_t>(d));
    const bool weekend = day.weekday() >= 5;
    const double expected = cfg.base_daily_trips * (weekend ? cfg.weekend_factor : cfg.weekday_factor);
    out.expected_daily.push_back(expected);
    const auto count = static_cast<std::size_t>(std::llround(rng.lognormal_mean_cv(expected, cfg.daily_noise_cv)));
    const std::size_t first = trips.size();
    for (std::size_t i = 0; i < count; ++i) {
      const Timestamp start_sec = draw_start(rng);
      std::size_t o, dst;
      if (start_sec < 12 * 3600 && !weekend) {
        o = draw(home, rng);
        dst = draw(work, rng);
      } else if (!weekend) {
        o = draw(work, rng);
        dst = draw(home, rng);
      } else {
        o = draw(rng.uniform() < 0.5 ? home : work, rng);
        dst = draw(rng.uniform() < 0.5 ? home : work, rng);
      }
      const double dur = std::max(60.0, rng.lognormal_mean_cv(cfg.duration_mean_s, cfg.duration_spread));
      Trip t;
      t.start_time = day.midnight() + start_sec;
      t.end_time = t.start_time + static_cast<Timestamp>(dur);
      if (cfg.mode == MatchMode::station) {
        t.origin = PlaceRef::station(static_cast<StationId>(o));
        t.destination = PlaceRef::station(static_cast<StationId>(dst));
      } else {
        t.origin = PlaceRef::coordinate(jitter(anchors[o], cfg.dockless_jitter_m, cfg.bbox, rng));
        t.destination = PlaceRef::coordinate(jitter(anchors[dst], cfg.dockless_jitter_m, cfg.bbox, rng));
      }
      if (cfg.n_companies > 1) t.company_id = static_cast<int>(rng.below(cfg.n_companies));
      trips.push_back(std::move(t));
    }
    std::stable_sort(trips.begin() + static_cast<std::ptrdiff_t>(first), trips.end(),
                     [](const Trip& a, const Trip& b) { return a.start_time < b.start_time; });
  }
  for (std::size_t i = 0; i < trips.size(); ++i) trips[i].id = static_cast<TripId>(i);
  out.trips = TripSet(std::move(trips));
  return out;
}

}  // namespace bikefleet
