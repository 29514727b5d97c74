#include <doctest.h>

#include <numeric>

#include "../support/fixtures.hpp"
#include "../support/oracles.hpp"
#include "bikefleet/cluster.hpp"
#include "bikefleet/error.hpp"
#include "bikefleet/geo.hpp"
#include "bikefleet/virtual_stations.hpp"

using namespace bikefleet;
using fixtures::blob;
using fixtures::kCenter;
using fixtures::offset;

namespace {

double hav(GeoPoint a, GeoPoint b) { return haversine_m(a, b); }

std::vector<GeoPoint> three_blobs(Rng& rng, std::size_t per_blob) {
  std::vector<GeoPoint> pts;
  for (const GeoPoint c : {offset(kCenter, 0, 0), offset(kCenter, 3000, 0), offset(kCenter, 0, 3000)}) {
    auto b = blob(rng, c, per_blob, 150.0);
    pts.insert(pts.end(), b.begin(), b.end());
  }
  return pts;
}

}  // namespace

TEST_CASE("dbscan: tight group plus a remote point") {
  std::vector<GeoPoint> pts;
  for (int i = 0; i < 5; ++i) pts.push_back(offset(kCenter, i * 2.0, 0));
  pts.push_back(offset(kCenter, 5000, 0));
  const DbscanResult r = dbscan(pts, 250, 5);
  CHECK(r.cluster_count == 1);
  for (int i = 0; i < 5; ++i) CHECK(r.labels[i] == 0);
  CHECK(r.labels[5] == kNoise);
}

TEST_CASE("dbscan: identical points form one cluster") {
  const std::vector<GeoPoint> pts(7, kCenter);
  const DbscanResult r = dbscan(pts, 250, 7);
  CHECK(r.cluster_count == 1);
  for (int l : r.labels) CHECK(l == 0);
}

TEST_CASE("dbscan matches the reference on random fixtures and is permutation invariant") {
  Rng rng(21);
  for (int fixture = 0; fixture < 20; ++fixture) {
    std::vector<GeoPoint> pts;
    const std::size_t blobs = 1 + rng.below(4);
    for (std::size_t b = 0; b < blobs; ++b) {
      auto part = blob(rng, offset(kCenter, rng.uniform(-2000, 2000), rng.uniform(-2000, 2000)), 10 + rng.below(30),
                       rng.uniform(80, 400));
      pts.insert(pts.end(), part.begin(), part.end());
    }
    for (std::size_t i = 0; i < 15; ++i) pts.push_back(offset(kCenter, rng.uniform(-4000, 4000), rng.uniform(-4000, 4000)));
    const double eps = rng.uniform(80, 300);
    const std::size_t min_pts = 2 + rng.below(6);
    const DbscanResult r = dbscan(pts, eps, min_pts);
    CHECK(oracles::same_partition(r.labels, oracles::reference_dbscan(pts, eps, min_pts, hav)));

    std::vector<std::size_t> perm(pts.size());
    std::iota(perm.begin(), perm.end(), 0);
    for (std::size_t i = perm.size(); i > 1; --i) std::swap(perm[i - 1], perm[rng.below(i)]);
    std::vector<GeoPoint> shuffled;
    for (std::size_t i : perm) shuffled.push_back(pts[i]);
    const DbscanResult rs = dbscan(shuffled, eps, min_pts);
    std::vector<int> back(pts.size());
    for (std::size_t i = 0; i < perm.size(); ++i) back[perm[i]] = rs.labels[i];
    CHECK(oracles::same_partition(r.labels, back));
  }
}

TEST_CASE("dbscan: two blobs 1 km apart") {
  Rng rng(5);
  auto pts = blob(rng, kCenter, 30, 100);
  auto far = blob(rng, offset(kCenter, 1000, 0), 30, 100);
  pts.insert(pts.end(), far.begin(), far.end());
  const DbscanResult r = dbscan(pts, 250, 5);
  CHECK(r.cluster_count == 2);
  CHECK(oracles::same_partition(r.labels, oracles::reference_dbscan(pts, 250, 5, hav)));
}

TEST_CASE("kmeans with k == n has zero SSE") {
  Rng rng(6);
  const auto pts = blob(rng, kCenter, 12, 500);
  const KMeansResult r = kmeans(pts, pts.size(), 1);
  CHECK(r.sse == 0.0);
  std::vector<int> used(pts.size(), 0);
  for (auto a : r.assignment) ++used[a];
  for (int u : used) CHECK(u == 1);
}

TEST_CASE("kmeans with k == 1 lands on the coordinate mean") {
  Rng rng(7);
  const auto pts = blob(rng, kCenter, 40, 800);
  const KMeansResult r = kmeans(pts, 1, 3);
  double lat = 0, lon = 0;
  for (const GeoPoint& p : pts) {
    lat += p.lat;
    lon += p.lon;
  }
  CHECK(r.centers[0].lat == doctest::Approx(lat / 40).epsilon(1e-12));
  CHECK(r.centers[0].lon == doctest::Approx(lon / 40).epsilon(1e-12));
}

TEST_CASE("kmeans rejects infeasible k") {
  const std::vector<GeoPoint> pts(3, kCenter);
  CHECK_THROWS_AS(kmeans(pts, 4, 1), Error);
  CHECK_THROWS_AS(kmeans(pts, 0, 1), Error);
}

TEST_CASE("kmeans separates three blobs and every point is at its nearest center") {
  Rng rng(8);
  const auto pts = three_blobs(rng, 40);
  const KMeansResult r = kmeans(pts, 3, 17);
  for (std::size_t b = 0; b < 3; ++b) {
    for (std::size_t i = 1; i < 40; ++i) CHECK(r.assignment[b * 40 + i] == r.assignment[b * 40]);
  }
  CHECK(r.assignment[0] != r.assignment[40]);
  CHECK(r.assignment[40] != r.assignment[80]);
  CHECK(r.assignment[0] != r.assignment[80]);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    double best = std::numeric_limits<double>::infinity();
    for (const GeoPoint& c : r.centers) best = std::min(best, haversine_m(pts[i], c));
    CHECK(haversine_m(pts[i], r.centers[r.assignment[i]]) == best);
  }
}

TEST_CASE("kmeans SSE never increases and runs are deterministic") {
  Rng rng(9);
  for (int run = 0; run < 40; ++run) {
    std::vector<GeoPoint> pts;
    for (int i = 0; i < 200; ++i) pts.push_back(offset(kCenter, rng.uniform(-3000, 3000), rng.uniform(-3000, 3000)));
    const std::size_t k = 1 + rng.below(25);
    const KMeansResult r = kmeans(pts, k, static_cast<std::uint64_t>(run));
    for (std::size_t i = 1; i < r.sse_trace.size(); ++i) CHECK(r.sse_trace[i] <= r.sse_trace[i - 1]);
    const KMeansResult again = kmeans(pts, k, static_cast<std::uint64_t>(run));
    CHECK(again.centers == r.centers);
    CHECK(again.sse == r.sse);
  }
}

TEST_CASE("elbow picks 3 for three blobs and 1 for a single blob") {
  Rng rng(10);
  const auto pts = three_blobs(rng, 40);
  const std::vector<std::size_t> grid{1, 2, 3, 4, 5, 6};
  CHECK(elbow_select_k(pts, grid, 5).k == 3);
  const auto single = blob(rng, kCenter, 50, 30);
  const std::vector<std::size_t> small{1, 2, 3};
  CHECK(elbow_select_k(single, small, 5).k == 1);
  const std::vector<std::size_t> two{1, 2};
  CHECK_THROWS_AS(elbow_select_k(pts, two, 5), Error);
  const std::vector<std::size_t> unsorted{3, 1, 2};
  CHECK_THROWS_AS(elbow_select_k(pts, unsorted, 5), Error);
}

TEST_CASE("assign_place: exact center, ties to the lowest id, brute-force agreement") {
  const GeoPoint a = offset(kCenter, 0, -500), b = offset(kCenter, 0, 500);
  const VirtualStationSet vs({offset(kCenter, 3000, 0), offset(kCenter, 4000, 0), offset(kCenter, 5000, 0), a,
                              offset(kCenter, 6000, 0), offset(kCenter, 7000, 0), offset(kCenter, 8000, 0), b},
                             250.0, {});
  const PlaceAssignment at_center = assign_place(a, vs);
  CHECK(at_center.vs_id == 3);
  CHECK(at_center.in_service_area);
  CHECK(assign_place(offset(kCenter, 0, 0), vs).vs_id == 3);  // equidistant to 3 and 7

  Rng rng(12);
  std::vector<GeoPoint> centers;
  for (int i = 0; i < 300; ++i) centers.push_back(offset(kCenter, rng.uniform(-4000, 4000), rng.uniform(-4000, 4000)));
  const VirtualStationSet big(centers, 250.0, {});
  for (int i = 0; i < 10000; ++i) {
    const GeoPoint p = offset(kCenter, rng.uniform(-4500, 4500), rng.uniform(-4500, 4500));
    std::size_t best = 0;
    for (std::size_t c = 1; c < centers.size(); ++c) {
      if (haversine_m(p, centers[c]) < haversine_m(p, centers[best])) best = c;
    }
    const PlaceAssignment got = assign_place(p, big);
    CHECK(got.vs_id == static_cast<PlaceId>(best));
    CHECK(got.in_service_area == (haversine_m(p, centers[best]) < 250.0));
  }
}

TEST_CASE("duplicate centers are rejected") {
  CHECK_THROWS_AS(VirtualStationSet({kCenter, kCenter}, 250.0, {}), Error);
}

namespace {

std::map<CivilDate, TripSet> history_of(const std::vector<std::vector<GeoPoint>>& origins_per_day) {
  std::map<CivilDate, TripSet> h;
  TripId id = 0;
  for (std::size_t d = 0; d < origins_per_day.size(); ++d) {
    const CivilDate day = fixtures::kDay.plus_days(static_cast<std::int32_t>(d));
    std::vector<Trip> trips;
    for (const GeoPoint& o : origins_per_day[d]) {
      trips.push_back(fixtures::dockless_trip(id++, o, day.midnight() + 3600, o, day.midnight() + 4000));
    }
    h[day] = TripSet(trips);
  }
  return h;
}

}  // namespace

TEST_CASE("virtual stations: blob centroid ignores the remote singleton") {
  Rng rng(13);
  auto pts = blob(rng, kCenter, 30, 60);
  pts.push_back(offset(kCenter, 8000, 8000));
  ClusteringParams p;
  p.k = 1;
  const VirtualStationSet vs = identify_virtual_stations(history_of({pts}), p);
  REQUIRE(vs.size() == 1);
  double lat = 0, lon = 0;
  for (std::size_t i = 0; i < 30; ++i) {
    lat += pts[i].lat;
    lon += pts[i].lon;
  }
  CHECK(vs.stations()[0].center.lat == doctest::Approx(lat / 30).epsilon(1e-12));
  CHECK(vs.stations()[0].center.lon == doctest::Approx(lon / 30).epsilon(1e-12));
  CHECK(vs.stations()[0].service_radius_m == 250.0);
  CHECK(vs.params().noise_points == 1);
}

TEST_CASE("virtual stations: busiest day is clustered and all-noise is an error") {
  Rng rng(14);
  const auto quiet = blob(rng, offset(kCenter, 5000, 0), 100, 60);
  const auto busy = blob(rng, kCenter, 300, 60);
  ClusteringParams p;
  p.k = 1;
  const VirtualStationSet vs = identify_virtual_stations(history_of({quiet, busy}), p);
  CHECK(vs.params().source_day == fixtures::kDay.plus_days(1));
  CHECK(haversine_m(vs.stations()[0].center, kCenter) < 100.0);

  std::vector<GeoPoint> sparse;
  for (int i = 0; i < 20; ++i) sparse.push_back(offset(kCenter, i * 1000.0, 0));
  CHECK_THROWS_AS(identify_virtual_stations(history_of({sparse}), p), Error);
}

TEST_CASE("virtual stations are deterministic, inside the non-noise box, and round-trip through JSON") {
  Rng rng(15);
  std::vector<GeoPoint> pts;
  for (int b = 0; b < 6; ++b) {
    auto part = blob(rng, offset(kCenter, rng.uniform(-3000, 3000), rng.uniform(-3000, 3000)), 40, 200);
    pts.insert(pts.end(), part.begin(), part.end());
  }
  ClusteringParams p;
  p.k_grid = {2, 4, 6, 8, 10, 12};
  p.seed = 77;
  const auto h = history_of({pts});
  const VirtualStationSet a = identify_virtual_stations(h, p);
  const VirtualStationSet b = identify_virtual_stations(h, p);
  CHECK(a.to_json() == b.to_json());
  const DbscanResult db = dbscan(pts, p.eps_m, p.min_pts);
  double lo_lat = 90, hi_lat = -90, lo_lon = 180, hi_lon = -180;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (db.labels[i] == kNoise) continue;
    lo_lat = std::min(lo_lat, pts[i].lat);
    hi_lat = std::max(hi_lat, pts[i].lat);
    lo_lon = std::min(lo_lon, pts[i].lon);
    hi_lon = std::max(hi_lon, pts[i].lon);
  }
  for (const VirtualStation& s : a.stations()) {
    CHECK(s.center.lat >= lo_lat);
    CHECK(s.center.lat <= hi_lat);
    CHECK(s.center.lon >= lo_lon);
    CHECK(s.center.lon <= hi_lon);
  }
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(a.stations()[i].vs_id == static_cast<PlaceId>(i));
  const VirtualStationSet back = VirtualStationSet::from_json(a.to_json());
  CHECK(back.to_json() == a.to_json());
}
