#include <doctest.h>

#include "../support/fixtures.hpp"
#include "../support/oracles.hpp"
#include "bikefleet/error.hpp"
#include "bikefleet/geo.hpp"
#include "bikefleet/grid_index.hpp"

using namespace bikefleet;
using fixtures::offset;

TEST_CASE("haversine identity, symmetry and agreement with independent formulas") {
  CHECK(haversine_m({32.0, 118.0}, {32.0, 118.0}) == 0.0);
  const double d = haversine_m({32.0, 118.0}, {32.0, 118.003});
  CHECK(d == doctest::Approx(oracles::cosine_law_m({32.0, 118.0}, {32.0, 118.003})).epsilon(1e-6));

  Rng rng(3);
  for (int i = 0; i < 2000; ++i) {
    const GeoPoint a{rng.uniform(-89, 89), rng.uniform(-180, 180)};
    const GeoPoint b{rng.uniform(-89, 89), rng.uniform(-180, 180)};
    CHECK(haversine_m(a, b) == haversine_m(b, a));
    CHECK(haversine_m(a, b) == doctest::Approx(oracles::vincenty_sphere_m(a, b)).epsilon(1e-9));
  }
}

TEST_CASE("chord and arc conversions agree with haversine") {
  Rng rng(4);
  for (int i = 0; i < 1000; ++i) {
    const GeoPoint a{rng.uniform(31, 33), rng.uniform(118, 119)};
    const GeoPoint b = offset(a, rng.uniform(-2000, 2000), rng.uniform(-2000, 2000));
    CHECK(chord2_to_arc(chord2_m2(a, b)) == doctest::Approx(haversine_m(a, b)).epsilon(1e-7));
    CHECK(chord2_to_arc(arc_to_chord2(1234.5)) == doctest::Approx(1234.5).epsilon(1e-12));
  }
  const ChordBand band = ChordBand::for_radius(250.0);
  CHECK(band.lo < arc_to_chord2(250.0));
  CHECK(band.hi > arc_to_chord2(250.0));
}

TEST_CASE("grid index on empty input has no cells") {
  const GridIndex idx = GridIndex::build(std::vector<GeoPoint>{});
  CHECK(idx.cell_count() == 0);
  CHECK(idx.query_radius({32, 118}, 250).empty());
}

TEST_CASE("grid index preconditions") {
  const std::vector<GeoPoint> pts{{32, 118}};
  CHECK_THROWS_AS(GridIndex::build(pts, 0.0), Error);
  const GridIndex idx = GridIndex::build(pts);
  CHECK_THROWS_AS(idx.query_radius({32, 118}, 0.0), Error);
}

TEST_CASE("every point lands in exactly one cell, including cell boundaries") {
  const GeoPoint origin{32.0, 118.0};
  std::vector<GeoPoint> pts;
  for (int i = 0; i < 5; ++i) {
    for (int j = 0; j < 5; ++j) pts.push_back(offset(origin, i * 250.0, j * 250.0));
  }
  const GridIndex idx = GridIndex::build(pts, 250.0, origin);
  std::vector<int> seen(pts.size(), 0);
  for (std::uint32_t id : idx.ids()) ++seen[id];
  for (int s : seen) CHECK(s == 1);
  for (std::uint32_t i = 0; i < pts.size(); ++i) {
    const auto cell = idx.cell(idx.geometry().cell_of(pts[i]));
    CHECK(std::count(cell.begin(), cell.end(), i) == 1);
  }
}

TEST_CASE("radius query: 200 m in, 250 m out, same location first") {
  const GeoPoint c{32.05, 118.78};
  const std::vector<GeoPoint> pts{offset(c, 200, 0), c, offset(c, 0, 250.0001), offset(c, 120, 0)};
  const GridIndex idx = GridIndex::build(pts);
  const auto hits = idx.query_radius(c, 250.0);
  REQUIRE(hits.size() == 3);
  CHECK(hits[0].id == 1);
  CHECK(hits[0].distance_m == 0.0);
  CHECK(hits[1].id == 3);
  CHECK(hits[2].id == 0);
}

TEST_CASE("radius query equals a linear scan on 10k random points") {
  Rng rng(11);
  std::vector<GeoPoint> pts;
  for (int i = 0; i < 10000; ++i) pts.push_back(offset(fixtures::kCenter, rng.uniform(-5000, 5000), rng.uniform(-5000, 5000)));
  for (int i = 0; i < 50; ++i) pts.push_back(pts[rng.below(pts.size())]);  // exact duplicates
  for (double cell : {100.0, 250.0, 900.0}) {
    const GridIndex idx = GridIndex::build(pts, cell);
    for (int q = 0; q < 200; ++q) {
      const GeoPoint c = q % 4 == 0 ? pts[rng.below(pts.size())]
                                    : offset(fixtures::kCenter, rng.uniform(-5500, 5500), rng.uniform(-5500, 5500));
      const double r = q % 2 ? 250.0 : rng.uniform(10, 1200);
      const auto hits = idx.query_radius(c, r);
      const auto want = oracles::radius_scan(pts, c, r, [](GeoPoint a, GeoPoint b) { return haversine_m(a, b); });
      REQUIRE(hits.size() == want.size());
      for (std::size_t i = 0; i < hits.size(); ++i) {
        CHECK(hits[i].id == want[i].second);
        CHECK(hits[i].distance_m == want[i].first);
      }
    }
  }
}

TEST_CASE("radius query near the poles and across the antimeridian") {
  std::vector<GeoPoint> pts{{89.999, 10.0}, {89.999, -170.0}, {0.0, 179.9995}, {0.0, -179.9995}, {-89.9995, 0.0}};
  const GridIndex idx = GridIndex::build(pts, 250.0);
  for (const GeoPoint& c : pts) {
    for (double r : {100.0, 250.0, 500.0}) {
      const auto hits = idx.query_radius(c, r);
      const auto want = oracles::radius_scan(pts, c, r, [](GeoPoint a, GeoPoint b) { return haversine_m(a, b); });
      REQUIRE(hits.size() == want.size());
      for (std::size_t i = 0; i < hits.size(); ++i) CHECK(hits[i].id == want[i].second);
    }
  }
}
