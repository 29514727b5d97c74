#include "bikefleet/cluster.hpp"

#include <algorithm>
#include <numeric>

#include "bikefleet/error.hpp"
#include "bikefleet/geo.hpp"
#include "bikefleet/grid_index.hpp"
#include "bikefleet/rng.hpp"

namespace bikefleet {
namespace {

struct DisjointSet {
  std::vector<std::uint32_t> parent;
  explicit DisjointSet(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0u); }
  std::uint32_t find(std::uint32_t x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  }
  void unite(std::uint32_t a, std::uint32_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
};

bool lex_less(GeoPoint a, GeoPoint b) { return a.lat != b.lat ? a.lat < b.lat : a.lon < b.lon; }

double tie_margin(double chord2) { return chord2 * 1e-9 + 1e-6; }

/// Nearest center by haversine with lowest-index ties. The SIMD top-2 pass
/// settles the common case; near ties fall back to exact comparison.
std::size_t nearest_in(GeoPoint p, const simd::Query& q, std::span<const GeoPoint> centers,
                       const CartesianSoA& cart, std::vector<double>& scratch) {
  const simd::KernelTable& kernels = simd::active_kernels();
  const simd::Top2 top = kernels.argmin2(q, cart.view());
  if (top.second > top.best + tie_margin(top.best)) return top.index;
  scratch.resize(cart.size());
  kernels.chord2(q, cart.view(), scratch.data());
  const double limit = top.best + tie_margin(top.best);
  std::size_t best = top.index;
  double best_d = haversine_m(p, centers[best]);
  for (std::size_t c = 0; c < scratch.size(); ++c) {
    if (scratch[c] > limit || c == top.index) continue;
    const double d = haversine_m(p, centers[c]);
    if (d < best_d || (d == best_d && c < best)) {
      best = c;
      best_d = d;
    }
  }
  return best;
}

double total_sse(std::span<const GeoPoint> points, std::span<const GeoPoint> centers,
                 std::span<const std::uint32_t> assignment) {
  double s = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const double d = haversine_m(points[i], centers[assignment[i]]);
    s += d * d;
  }
  return s;
}

}  // namespace

DbscanResult dbscan(std::span<const GeoPoint> points, double eps_m, std::size_t min_pts) {
  if (!(eps_m > 0.0)) throw Error(ErrorKind::precondition, "dbscan eps must be positive");
  if (min_pts < 1) throw Error(ErrorKind::precondition, "dbscan min_pts must be at least 1");

  const std::size_t n = points.size();
  DbscanResult out;
  out.labels.assign(n, kNoise);
  out.core.assign(n, false);
  if (n == 0) return out;

  const GridIndex index = GridIndex::build(points, eps_m);
  for (std::size_t i = 0; i < n; ++i) {
    out.core[i] = index.query_radius(points[i], eps_m).size() >= min_pts;
  }

  DisjointSet sets(n);
  std::vector<std::int64_t> border_core(n, -1);
  for (std::size_t i = 0; i < n; ++i) {
    const auto hits = index.query_radius(points[i], eps_m);
    if (out.core[i]) {
      for (const auto& h : hits) {
        if (out.core[h.id]) sets.unite(static_cast<std::uint32_t>(i), h.id);
      }
    }
  }

  // Canonical representative per core component: lexicographically smallest
  // coordinate among its cores, then lowest index. Order independent up to
  // duplicate coordinates.
  std::vector<std::int64_t> canon(n, -1);
  for (std::size_t i = 0; i < n; ++i) {
    if (!out.core[i]) continue;
    const std::uint32_t r = sets.find(static_cast<std::uint32_t>(i));
    if (canon[r] < 0 || lex_less(points[i], points[canon[r]])) canon[r] = static_cast<std::int64_t>(i);
  }

  for (std::size_t i = 0; i < n; ++i) {
    if (out.core[i]) continue;
    const auto hits = index.query_radius(points[i], eps_m);
    double best_d = 0.0;
    for (const auto& h : hits) {
      if (!out.core[h.id]) continue;
      if (border_core[i] < 0 || h.distance_m < best_d) {
        border_core[i] = h.id;
        best_d = h.distance_m;
      } else if (h.distance_m == best_d) {
        const GeoPoint a = points[canon[sets.find(h.id)]];
        const GeoPoint b = points[canon[sets.find(static_cast<std::uint32_t>(border_core[i]))]];
        if (lex_less(a, b)) border_core[i] = h.id;
      }
    }
  }

  std::vector<int> id_of_root(n, -1);
  for (std::size_t i = 0; i < n; ++i) {
    std::int64_t anchor = out.core[i] ? static_cast<std::int64_t>(i) : border_core[i];
    if (anchor < 0) continue;
    const std::uint32_t r = sets.find(static_cast<std::uint32_t>(anchor));
    if (id_of_root[r] < 0) id_of_root[r] = out.cluster_count++;
    out.labels[i] = id_of_root[r];
  }
  return out;
}

std::size_t nearest_center(GeoPoint p, std::span<const GeoPoint> centers) {
  if (centers.empty()) throw Error(ErrorKind::precondition, "no centers to search");
  CartesianSoA cart;
  cart.reserve(centers.size());
  for (const GeoPoint& c : centers) cart.push_back(c);
  std::vector<double> scratch;
  return nearest_in(p, to_cartesian(p), centers, cart, scratch);
}

KMeansResult kmeans(std::span<const GeoPoint> points, std::size_t k, std::uint64_t seed,
                    const KMeansOptions& options) {
  const std::size_t n = points.size();
  if (k < 1 || k > n) {
    throw Error(ErrorKind::precondition,
                "kmeans needs 1 <= k <= n (k=" + std::to_string(k) + ", n=" + std::to_string(n) + ")");
  }
  const simd::KernelTable& kernels = simd::active_kernels();
  CartesianSoA pts;
  pts.reserve(n);
  for (const GeoPoint& p : points) pts.push_back(p);

  // k-means++ seeding on squared chord length.
  Rng rng(seed);
  std::vector<std::size_t> chosen;
  std::vector<bool> taken(n, false);
  std::vector<double> d2(n, std::numeric_limits<double>::infinity());
  auto take = [&](std::size_t i) {
    chosen.push_back(i);
    taken[i] = true;
    kernels.min_update(simd::Query{pts.x[i], pts.y[i], pts.z[i]}, pts.view(), d2.data());
  };
  take(static_cast<std::size_t>(rng.below(n)));
  while (chosen.size() < k) {
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) total += taken[i] ? 0.0 : d2[i];
    std::size_t pick = n;
    if (total > 0.0) {
      const double target = rng.uniform() * total;
      double acc = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        if (taken[i] || d2[i] <= 0.0) continue;
        acc += d2[i];
        pick = i;
        if (acc > target) break;
      }
    }
    if (pick == n) {
      // Remaining points coincide with chosen ones; take the first untaken.
      pick = static_cast<std::size_t>(std::find(taken.begin(), taken.end(), false) - taken.begin());
    }
    take(pick);
  }

  KMeansResult r;
  r.centers.reserve(k);
  for (std::size_t i : chosen) r.centers.push_back(points[i]);
  r.assignment.assign(n, 0);

  std::vector<double> scratch;
  auto assign_all = [&]() {
    CartesianSoA cc;
    cc.reserve(k);
    for (const GeoPoint& c : r.centers) cc.push_back(c);
    for (std::size_t i = 0; i < n; ++i) {
      r.assignment[i] = static_cast<std::uint32_t>(
          nearest_in(points[i], simd::Query{pts.x[i], pts.y[i], pts.z[i]}, r.centers, cc, scratch));
    }
  };

  assign_all();
  r.sse = total_sse(points, r.centers, r.assignment);
  r.sse_trace.push_back(r.sse);

  std::vector<double> sum_lat(k), sum_lon(k), sse_old(k), sse_new(k);
  std::vector<std::size_t> count(k);
  for (r.iterations = 0; r.iterations < options.max_iterations;) {
    ++r.iterations;
    std::fill(sum_lat.begin(), sum_lat.end(), 0.0);
    std::fill(sum_lon.begin(), sum_lon.end(), 0.0);
    std::fill(count.begin(), count.end(), 0);
    for (std::size_t i = 0; i < n; ++i) {
      sum_lat[r.assignment[i]] += points[i].lat;
      sum_lon[r.assignment[i]] += points[i].lon;
      ++count[r.assignment[i]];
    }
    std::vector<GeoPoint> proposed = r.centers;
    for (std::size_t c = 0; c < k; ++c) {
      if (count[c] > 0) {
        proposed[c] = GeoPoint{sum_lat[c] / static_cast<double>(count[c]),
                               sum_lon[c] / static_cast<double>(count[c])};
      }
    }
    std::fill(sse_old.begin(), sse_old.end(), 0.0);
    std::fill(sse_new.begin(), sse_new.end(), 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      const std::uint32_t c = r.assignment[i];
      const double a = haversine_m(points[i], r.centers[c]);
      const double b = haversine_m(points[i], proposed[c]);
      sse_old[c] += a * a;
      sse_new[c] += b * b;
    }
    double max_shift = 0.0;
    for (std::size_t c = 0; c < k; ++c) {
      if (sse_new[c] > sse_old[c]) proposed[c] = r.centers[c];
      max_shift = std::max(max_shift, haversine_m(r.centers[c], proposed[c]));
    }
    const double updated = total_sse(points, proposed, r.assignment);
    if (updated > r.sse) break;  // rounding-level regression; keep the previous centers
    r.centers = std::move(proposed);
    r.sse = updated;
    r.sse_trace.push_back(r.sse);

    assign_all();
    r.sse = total_sse(points, r.centers, r.assignment);
    r.sse_trace.push_back(r.sse);
    if (max_shift < options.shift_tolerance_m) break;
  }
  return r;
}

ElbowResult elbow_select_k(std::span<const GeoPoint> points, std::span<const std::size_t> k_grid,
                           std::uint64_t seed, double scale_m) {
  if (k_grid.size() < 3) throw Error(ErrorKind::precondition, "elbow selection needs at least 3 grid points");
  if (!std::is_sorted(k_grid.begin(), k_grid.end()) ||
      std::adjacent_find(k_grid.begin(), k_grid.end()) != k_grid.end()) {
    throw Error(ErrorKind::precondition, "k grid must be strictly ascending");
  }
  ElbowResult out;
  out.grid.assign(k_grid.begin(), k_grid.end());
  for (std::size_t k : k_grid) out.sse.push_back(kmeans(points, k, seed).sse);

  const double n = static_cast<double>(points.size());
  const double y_scale = std::max({out.sse.front(), n * scale_m * scale_m, 1e-300});
  const double k0 = static_cast<double>(k_grid.front());
  const double k1 = static_cast<double>(k_grid.back());
  const double y0 = out.sse.front() / y_scale;
  const double y1 = out.sse.back() / y_scale;
  // Line through (0, y0) and (1, y1); positive distance = below the chord.
  const double dx = 1.0;
  const double dy = y1 - y0;
  const double len = std::hypot(dx, dy);

  out.k = k_grid.front();
  double best = 1e-3;
  for (std::size_t i = 0; i < k_grid.size(); ++i) {
    const double x = (static_cast<double>(k_grid[i]) - k0) / (k1 - k0);
    const double y = out.sse[i] / y_scale;
    const double dist = (dx * (y0 - y) + dy * x) / len;
    out.chord_distance.push_back(dist);
    if (dist > best) {
      best = dist;
      out.k = k_grid[i];
    }
  }
  return out;
}

}  // namespace bikefleet
