#include <doctest.h>

#include <cstring>

#include "../support/fixtures.hpp"
#include "bikefleet/geo.hpp"
#include "bikefleet/simd/kernels.hpp"

using namespace bikefleet;
using namespace bikefleet::simd;

namespace {

bool same_bits(double a, double b) { return std::memcmp(&a, &b, sizeof a) == 0; }

struct Cloud {
  CartesianSoA soa;
};

Cloud make_cloud(Rng& rng, std::size_t n, bool with_ties) {
  Cloud c;
  std::vector<GeoPoint> pts;
  for (std::size_t i = 0; i < n; ++i) {
    if (with_ties && i > 0 && rng.below(3) == 0) {
      pts.push_back(pts[rng.below(pts.size())]);
    } else {
      pts.push_back(fixtures::offset(fixtures::kCenter, rng.uniform(-3000, 3000), rng.uniform(-3000, 3000)));
    }
  }
  for (const GeoPoint& p : pts) c.soa.push_back(p);
  return c;
}

}  // namespace

TEST_CASE("scalar reference argmin2 semantics") {
  CartesianSoA soa;
  const GeoPoint q{32.0, 118.0};
  soa.push_back(fixtures::offset(q, 100, 0));
  soa.push_back(fixtures::offset(q, 50, 0));
  soa.push_back(fixtures::offset(q, 50, 0));
  soa.push_back(fixtures::offset(q, 300, 0));
  const Top2 t = scalar_kernels().argmin2(to_cartesian(q), soa.view());
  CHECK(t.index == 1);
  CHECK(t.best == t.second);  // exact tie between 1 and 2
  const Top2 empty = scalar_kernels().argmin2(to_cartesian(q), soa.view(0, 0));
  CHECK(empty.index == Top2::npos);
}

TEST_CASE("AVX2 kernels are bit-identical to the scalar reference") {
  const KernelTable* avx = avx2_kernels();
  if (avx == nullptr) {
    MESSAGE("AVX2 unavailable; only the scalar path is exercised");
    return;
  }
  const KernelTable& sc = scalar_kernels();
  Rng rng(99);
  for (int round = 0; round < 300; ++round) {
    const std::size_t n = rng.below(70);
    const Cloud cloud = make_cloud(rng, n, round % 2 == 0);
    const Query q = n > 0 && rng.below(4) == 0
                        ? Query{cloud.soa.x[rng.below(n)], cloud.soa.y[rng.below(n)], cloud.soa.z[rng.below(n)]}
                        : to_cartesian(fixtures::offset(fixtures::kCenter, rng.uniform(-3000, 3000), 0));
    // Unaligned sub-views exercise the scalar tail and odd offsets.
    const std::size_t b = n > 0 ? rng.below(std::min<std::size_t>(n, 5)) : 0;
    const PointsSoA view = cloud.soa.view(b, n);

    std::vector<double> o1(view.n), o2(view.n);
    sc.chord2(q, view, o1.data());
    avx->chord2(q, view, o2.data());
    for (std::size_t i = 0; i < view.n; ++i) CHECK(same_bits(o1[i], o2[i]));

    std::vector<double> m1(view.n), m2;
    for (double& v : m1) v = rng.below(2) ? 1e7 * rng.uniform() : std::numeric_limits<double>::infinity();
    m2 = m1;
    sc.min_update(q, view, m1.data());
    avx->min_update(q, view, m2.data());
    for (std::size_t i = 0; i < view.n; ++i) CHECK(same_bits(m1[i], m2[i]));

    const Top2 t1 = sc.argmin2(q, view);
    const Top2 t2 = avx->argmin2(q, view);
    CHECK(t1.index == t2.index);
    CHECK(same_bits(t1.best, t2.best));
    CHECK(same_bits(t1.second, t2.second));
  }
}

TEST_CASE("active kernels are one of the two tables") {
  const KernelTable& k = active_kernels();
  CHECK((&k == &scalar_kernels() || &k == avx2_kernels()));
}
