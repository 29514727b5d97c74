#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "bikefleet/trip.hpp"

namespace bikefleet {

inline constexpr int kNoise = -1;

struct DbscanResult {
  std::vector<int> labels;  // cluster id in [0, cluster_count) or kNoise
  std::vector<bool> core;
  int cluster_count = 0;
};

/// Density-based clustering with haversine neighborhoods (distance < eps_m,
/// the point itself included). Core points are grouped by density
/// reachability; a border point joins the cluster of its nearest core
/// neighbor, so labels do not depend on input order except for numbering.
/// Clusters are numbered by first appearance in the input.
DbscanResult dbscan(std::span<const GeoPoint> points, double eps_m, std::size_t min_pts);

struct KMeansOptions {
  std::size_t max_iterations = 100;
  double shift_tolerance_m = 1.0;
};

struct KMeansResult {
  std::vector<GeoPoint> centers;
  std::vector<std::uint32_t> assignment;
  double sse = 0.0;  // sum of squared haversine distances, m^2
  /// SSE after the seeding assignment and after every subsequent
  /// assignment and update step.
  std::vector<double> sse_trace;
  std::size_t iterations = 0;
};

/// Lloyd iterations from k-means++ seeding. Centers are arithmetic means of
/// latitude and longitude; a cluster keeps its previous center when the mean
/// would raise its SSE, so the objective never increases. Deterministic for a
/// given seed. Throws Error(precondition) unless 1 <= k <= points.size().
KMeansResult kmeans(std::span<const GeoPoint> points, std::size_t k, std::uint64_t seed,
                    const KMeansOptions& options = {});

/// Index of the nearest center by haversine; ties go to the lowest index.
std::size_t nearest_center(GeoPoint p, std::span<const GeoPoint> centers);

struct ElbowResult {
  std::size_t k = 0;
  std::vector<std::size_t> grid;
  std::vector<double> sse;
  std::vector<double> chord_distance;
};

/// Runs kmeans for every k in `k_grid` and picks the k whose (k, SSE) point
/// lies farthest below the chord joining the first and last grid points.
/// k is rescaled to [0,1] and SSE is divided by max(SSE(first), n * scale_m^2),
/// so a curve that never drops by a meaningful fraction of scale_m^2 per point
/// has no elbow; distances within 1e-3 of zero count as ties, and ties resolve
/// to the smallest k.
///
/// Throws Error(precondition) for fewer than 3 grid points, an unsorted grid,
/// or any k outside [1, n].
ElbowResult elbow_select_k(std::span<const GeoPoint> points, std::span<const std::size_t> k_grid,
                           std::uint64_t seed, double scale_m = 250.0);

}  // namespace bikefleet
