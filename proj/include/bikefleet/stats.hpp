#pragma once

#include <map>
#include <optional>
#include <span>
#include <vector>

namespace bikefleet {

struct SeriesStats {
  std::size_t n = 0;
  double mean = 0.0;
  double stddev = 0.0;  // population
  double cv = 0.0;
  std::optional<double> pearson_r;
  std::optional<double> r_squared;  // simple linear regression of paired on series
  std::map<std::size_t, double> rrmse_lag;
};

/// cv = population stddev / mean.
/// rrmse_lag[k] = sqrt(mean_t (x_t - x_{t-k})^2) / mean_t x_t over t >= k, for
/// each k < n.
/// Throws Error(precondition) for fewer than 2 values, a zero mean, unequal
/// paired lengths, or a zero-variance series when a correlation is requested.
SeriesStats summary_stats(std::span<const double> series, std::optional<std::span<const double>> paired = {},
                          std::span<const std::size_t> lags = {});

/// Lags 1 and 7 (day-to-day and week-to-week).
SeriesStats summary_stats_daily(std::span<const double> series,
                                std::optional<std::span<const double>> paired = {});

}  // namespace bikefleet
