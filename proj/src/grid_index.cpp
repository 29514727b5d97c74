#include "bikefleet/grid_index.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

#include "bikefleet/error.hpp"

namespace bikefleet {
namespace {

std::int32_t clamp_cell(double v) {
  const double f = std::floor(v);
  constexpr double lo = std::numeric_limits<std::int32_t>::min() / 2;
  constexpr double hi = std::numeric_limits<std::int32_t>::max() / 2;
  return static_cast<std::int32_t>(std::clamp(f, lo, hi));
}

}  // namespace

CellGeometry::CellGeometry(GeoPoint origin, double cell_size_m) : origin_(origin), cell_size_m_(cell_size_m) {
  if (!(cell_size_m > 0.0)) throw Error(ErrorKind::precondition, "grid cell size must be positive");
  dlat_deg_ = rad_to_deg(cell_size_m / kEarthRadiusM);
  dlon_deg_ = dlat_deg_ / std::max(std::cos(deg_to_rad(origin.lat)), 1e-6);
}

CellKey CellGeometry::cell_of(GeoPoint p) const {
  return {clamp_cell((p.lat - origin_.lat) / dlat_deg_), clamp_cell((p.lon - origin_.lon) / dlon_deg_)};
}

CellGeometry::Span CellGeometry::covering(GeoPoint center, double radius_m) const {
  const DegreeBox box = covering_box(center, radius_m);
  Span s;
  s.lo = cell_of(GeoPoint{box.min_lat, box.min_lon});
  s.hi = cell_of(GeoPoint{box.max_lat, box.max_lon});
  s.all_x = box.full_lon;
  return s;
}

GridIndex GridIndex::build(std::span<const GeoPoint> points, double cell_size_m) {
  GeoPoint origin{0.0, 0.0};
  if (!points.empty()) {
    origin = points.front();
    for (const GeoPoint& p : points) {
      origin.lat = std::min(origin.lat, p.lat);
      origin.lon = std::min(origin.lon, p.lon);
    }
  }
  return build(points, cell_size_m, origin);
}

GridIndex GridIndex::build(std::span<const GeoPoint> points, double cell_size_m, GeoPoint origin) {
  GridIndex g;
  g.geometry_ = CellGeometry(origin, cell_size_m);
  g.points_.assign(points.begin(), points.end());

  std::vector<CellKey> cell(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) cell[i] = g.geometry_.cell_of(points[i]);
  std::vector<std::uint32_t> order(points.size());
  std::iota(order.begin(), order.end(), 0u);
  std::stable_sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) { return cell[a] < cell[b]; });

  g.ids_ = std::move(order);
  g.cart_.reserve(points.size());
  for (std::size_t pos = 0; pos < g.ids_.size(); ++pos) {
    const std::uint32_t id = g.ids_[pos];
    if (pos == 0 || cell[id] != cell[g.ids_[pos - 1]]) {
      g.keys_.push_back(cell[id]);
      g.offsets_.push_back(static_cast<std::uint32_t>(pos));
    }
    g.cart_.push_back(points[id]);
  }
  g.offsets_.push_back(static_cast<std::uint32_t>(g.ids_.size()));
  return g;
}

std::span<const std::uint32_t> GridIndex::cell(CellKey key) const {
  const auto it = std::lower_bound(keys_.begin(), keys_.end(), key);
  if (it == keys_.end() || *it != key) return {};
  const auto k = static_cast<std::size_t>(it - keys_.begin());
  return std::span<const std::uint32_t>(ids_).subspan(offsets_[k], offsets_[k + 1] - offsets_[k]);
}

std::vector<GridIndex::Hit> GridIndex::query_radius(GeoPoint center, double radius_m) const {
  if (!(radius_m > 0.0)) throw Error(ErrorKind::precondition, "query radius must be positive");
  std::vector<Hit> hits;
  const ChordBand band = ChordBand::for_radius(radius_m);
  const simd::Query q = to_cartesian(center);
  const simd::KernelTable& kernels = simd::active_kernels();
  std::vector<double> scratch;
  for_each_candidate_range(center, radius_m, [&](std::size_t begin, std::size_t end) {
    scratch.resize(end - begin);
    kernels.chord2(q, cart_.view(begin, end), scratch.data());
    for (std::size_t i = 0; i < scratch.size(); ++i) {
      if (scratch[i] >= band.hi) continue;
      const std::uint32_t id = ids_[begin + i];
      const double d = haversine_m(center, points_[id]);
      if (d < radius_m) hits.push_back({id, d});
    }
  });
  std::sort(hits.begin(), hits.end(), [](const Hit& a, const Hit& b) {
    return a.distance_m != b.distance_m ? a.distance_m < b.distance_m : a.id < b.id;
  });
  return hits;
}

std::vector<std::uint32_t> GridIndex::query_radius_ids(GeoPoint center, double radius_m) const {
  std::vector<std::uint32_t> out;
  for (const Hit& h : query_radius(center, radius_m)) out.push_back(h.id);
  return out;
}

}  // namespace bikefleet
