#pragma once

#include <compare>
#include <cstdint>
#include <span>
#include <vector>

#include "bikefleet/geo.hpp"

namespace bikefleet {

struct CellKey {
  std::int32_t y = 0;
  std::int32_t x = 0;
  auto operator<=>(const CellKey&) const = default;
};

/// Maps coordinates to square-ish cells of `cell_size_m` (degree steps chosen
/// at the reference latitude). Bucketing is floor-based, so every point falls
/// in exactly one cell.
class CellGeometry {
 public:
  CellGeometry() = default;
  CellGeometry(GeoPoint origin, double cell_size_m);

  CellKey cell_of(GeoPoint p) const;

  struct Span {
    CellKey lo;
    CellKey hi;  // inclusive
    bool all_x;  // longitude range wrapped to the whole globe
  };
  /// Cells that may hold a point within `radius_m` of `center` (a superset).
  Span covering(GeoPoint center, double radius_m) const;

  GeoPoint origin() const { return origin_; }
  double cell_size_m() const { return cell_size_m_; }

 private:
  GeoPoint origin_{};
  double cell_size_m_ = 250.0;
  double dlat_deg_ = 0.0;
  double dlon_deg_ = 0.0;
};

/// Static index of points bucketed by cell. Radius queries gather candidates
/// from the covering cells and filter them exactly by haversine distance.
class GridIndex {
 public:
  struct Hit {
    std::uint32_t id;
    double distance_m;
  };

  GridIndex() = default;

  /// Throws Error(precondition) when cell_size_m <= 0. The reference origin
  /// defaults to the south-west corner of the points' bounding box.
  static GridIndex build(std::span<const GeoPoint> points, double cell_size_m = 250.0);
  static GridIndex build(std::span<const GeoPoint> points, double cell_size_m, GeoPoint origin);

  /// Ids with haversine distance strictly below `radius_m`, sorted by
  /// (distance, id). Throws Error(precondition) when radius_m <= 0.
  std::vector<Hit> query_radius(GeoPoint center, double radius_m) const;
  std::vector<std::uint32_t> query_radius_ids(GeoPoint center, double radius_m) const;

  std::size_t cell_count() const { return keys_.size(); }
  std::size_t size() const { return points_.size(); }
  const CellGeometry& geometry() const { return geometry_; }
  GeoPoint point(std::uint32_t id) const { return points_[id]; }

  /// Ids stored in one cell, in insertion order; empty when the cell is empty.
  std::span<const std::uint32_t> cell(CellKey key) const;

  /// Calls fn(begin, end) for each contiguous storage range of candidate cells
  /// around `center`. Storage positions index ids() and cartesian().
  template <typename Fn>
  void for_each_candidate_range(GeoPoint center, double radius_m, Fn&& fn) const;

  std::span<const std::uint32_t> ids() const { return ids_; }
  const CartesianSoA& cartesian() const { return cart_; }

 private:
  CellGeometry geometry_;
  std::vector<GeoPoint> points_;
  std::vector<CellKey> keys_;            // sorted, one per non-empty cell
  std::vector<std::uint32_t> offsets_;   // keys_.size() + 1
  std::vector<std::uint32_t> ids_;       // grouped by cell
  CartesianSoA cart_;                    // parallel to ids_
};

template <typename Fn>
void GridIndex::for_each_candidate_range(GeoPoint center, double radius_m, Fn&& fn) const {
  if (keys_.empty()) return;
  const CellGeometry::Span span = geometry_.covering(center, radius_m);
  const std::int64_t rows = std::int64_t{span.hi.y} - span.lo.y + 1;
  const std::int64_t cols = span.all_x ? std::int64_t{1} << 32 : std::int64_t{span.hi.x} - span.lo.x + 1;
  if (rows * cols > static_cast<std::int64_t>(keys_.size())) {
    for (std::size_t k = 0; k < keys_.size(); ++k) {
      const CellKey key = keys_[k];
      if (key.y < span.lo.y || key.y > span.hi.y) continue;
      if (!span.all_x && (key.x < span.lo.x || key.x > span.hi.x)) continue;
      fn(std::size_t{offsets_[k]}, std::size_t{offsets_[k + 1]});
    }
    return;
  }
  for (std::int32_t y = span.lo.y; y <= span.hi.y; ++y) {
    auto it = std::lower_bound(keys_.begin(), keys_.end(), CellKey{y, span.lo.x});
    for (; it != keys_.end() && it->y == y && it->x <= span.hi.x; ++it) {
      const auto k = static_cast<std::size_t>(it - keys_.begin());
      fn(std::size_t{offsets_[k]}, std::size_t{offsets_[k + 1]});
    }
    if (y == span.hi.y) break;
  }
}

}  // namespace bikefleet
