#pragma once

// Independent reference computations. Nothing here calls the code it checks.

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <set>
#include <vector>

#include "bikefleet/trip.hpp"

namespace oracles {

using bikefleet::GeoPoint;

constexpr double kR = 6371008.8;

inline double rad(double d) { return d * std::numbers::pi / 180.0; }

/// Spherical law of cosines.
inline double cosine_law_m(GeoPoint a, GeoPoint b) {
  const double c = std::sin(rad(a.lat)) * std::sin(rad(b.lat)) +
                   std::cos(rad(a.lat)) * std::cos(rad(b.lat)) * std::cos(rad(b.lon - a.lon));
  return kR * std::acos(std::clamp(c, -1.0, 1.0));
}

/// Vincenty-form great-circle distance (well conditioned everywhere).
inline double vincenty_sphere_m(GeoPoint a, GeoPoint b) {
  const double p1 = rad(a.lat), p2 = rad(b.lat), dl = rad(b.lon - a.lon);
  const double num = std::hypot(std::cos(p2) * std::sin(dl),
                                std::cos(p1) * std::sin(p2) - std::sin(p1) * std::cos(p2) * std::cos(dl));
  const double den = std::sin(p1) * std::sin(p2) + std::cos(p1) * std::cos(p2) * std::cos(dl);
  return kR * std::atan2(num, den);
}

template <class Dist>
std::vector<std::pair<double, std::uint32_t>> radius_scan(const std::vector<GeoPoint>& pts, GeoPoint c, double r,
                                                          Dist dist) {
  std::vector<std::pair<double, std::uint32_t>> out;
  for (std::uint32_t i = 0; i < pts.size(); ++i) {
    const double d = dist(c, pts[i]);
    if (d < r) out.emplace_back(d, i);
  }
  std::sort(out.begin(), out.end());
  return out;
}

/// Density reachability from first principles on a full distance matrix.
/// Border points join the cluster of their nearest core neighbor; equal
/// distances go to the cluster whose smallest (lat, lon) core point is smaller.
template <class Dist>
std::vector<int> reference_dbscan(const std::vector<GeoPoint>& pts, double eps, std::size_t min_pts, Dist dist) {
  const std::size_t n = pts.size();
  std::vector<std::vector<double>> d(n, std::vector<double>(n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) d[i][j] = dist(pts[i], pts[j]);
  }
  std::vector<bool> core(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t cnt = 0;
    for (std::size_t j = 0; j < n; ++j) cnt += d[i][j] < eps;
    core[i] = cnt >= min_pts;
  }
  std::vector<int> comp(n, -1);
  int next = 0;
  for (std::size_t s = 0; s < n; ++s) {
    if (!core[s] || comp[s] >= 0) continue;
    std::vector<std::size_t> stack{s};
    comp[s] = next;
    while (!stack.empty()) {
      const std::size_t u = stack.back();
      stack.pop_back();
      for (std::size_t v = 0; v < n; ++v) {
        if (core[v] && comp[v] < 0 && d[u][v] < eps) {
          comp[v] = next;
          stack.push_back(v);
        }
      }
    }
    ++next;
  }
  std::vector<std::pair<double, double>> rep(static_cast<std::size_t>(next),
                                             {std::numeric_limits<double>::infinity(), 0.0});
  for (std::size_t i = 0; i < n; ++i) {
    if (core[i]) rep[comp[i]] = std::min(rep[comp[i]], std::pair{pts[i].lat, pts[i].lon});
  }
  std::vector<int> label(n, -1);
  for (std::size_t i = 0; i < n; ++i) {
    if (core[i]) {
      label[i] = comp[i];
      continue;
    }
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < n; ++j) {
      if (!core[j] || !(d[i][j] < eps)) continue;
      if (d[i][j] < best || (d[i][j] == best && rep[comp[j]] < rep[label[i]])) {
        best = d[i][j];
        label[i] = comp[j];
      }
    }
  }
  return label;
}

/// True when two labelings agree up to a bijective renaming with -1 fixed.
inline bool same_partition(const std::vector<int>& a, const std::vector<int>& b) {
  if (a.size() != b.size()) return false;
  std::map<int, int> ab, ba;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if ((a[i] < 0) != (b[i] < 0)) return false;
    if (a[i] < 0) continue;
    const auto [it1, new1] = ab.emplace(a[i], b[i]);
    const auto [it2, new2] = ba.emplace(b[i], a[i]);
    if (it1->second != b[i] || it2->second != a[i]) return false;
  }
  return true;
}

struct Textbook {
  double cv, r, r2;
  std::map<std::size_t, double> rrmse;
};

/// Two-pass textbook formulas; r^2 taken as the square of r.
inline Textbook textbook_stats(const std::vector<double>& x, const std::vector<double>& y,
                               const std::vector<std::size_t>& lags) {
  const double n = static_cast<double>(x.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double vx = 0, vy = 0, cxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    vx += (x[i] - mx) * (x[i] - mx);
    vy += (y[i] - my) * (y[i] - my);
    cxy += (x[i] - mx) * (y[i] - my);
  }
  Textbook t;
  t.cv = std::sqrt(vx / n) / mx;
  t.r = cxy / (std::sqrt(vx) * std::sqrt(vy));
  t.r2 = t.r * t.r;
  for (std::size_t k : lags) {
    if (k >= x.size()) continue;
    double se = 0, lv = 0;
    for (std::size_t i = k; i < x.size(); ++i) {
      se += std::pow(x[i] - x[i - k], 2);
      lv += x[i];
    }
    const double m = static_cast<double>(x.size() - k);
    t.rrmse[k] = std::sqrt(se / m) / (lv / m);
  }
  return t;
}

}  // namespace oracles
