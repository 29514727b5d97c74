#include "bikefleet/stats.hpp"

#include <array>
#include <cmath>

#include "bikefleet/error.hpp"

namespace bikefleet {
namespace {

double mean_of(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

}  // namespace

SeriesStats summary_stats(std::span<const double> series, std::optional<std::span<const double>> paired,
                          std::span<const std::size_t> lags) {
  const std::size_t n = series.size();
  if (n < 2) throw Error(ErrorKind::precondition, "series statistics need at least 2 values");
  SeriesStats st;
  st.n = n;
  st.mean = mean_of(series);
  if (st.mean == 0.0) throw Error(ErrorKind::precondition, "series mean is zero; CV undefined");
  double sxx = 0.0;
  for (double x : series) sxx += (x - st.mean) * (x - st.mean);
  st.stddev = std::sqrt(sxx / static_cast<double>(n));
  st.cv = st.stddev / st.mean;

  if (paired) {
    const std::span<const double> y = *paired;
    if (y.size() != n) throw Error(ErrorKind::precondition, "paired series length differs");
    const double my = mean_of(y);
    double syy = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      syy += (y[i] - my) * (y[i] - my);
      sxy += (series[i] - st.mean) * (y[i] - my);
    }
    if (sxx == 0.0 || syy == 0.0) {
      throw Error(ErrorKind::precondition, "zero-variance series; correlation undefined");
    }
    st.pearson_r = sxy / std::sqrt(sxx * syy);
    // Regression route: 1 - SSres/SStot for the least-squares line y ~ a + b x.
    const double b = sxy / sxx;
    const double a = my - b * st.mean;
    double ss_res = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double e = y[i] - (a + b * series[i]);
      ss_res += e * e;
    }
    st.r_squared = 1.0 - ss_res / syy;
  }

  for (std::size_t k : lags) {
    if (k == 0 || k >= n) continue;
    double se = 0.0, level = 0.0;
    for (std::size_t t = k; t < n; ++t) {
      const double d = series[t] - series[t - k];
      se += d * d;
      level += series[t];
    }
    const double m = static_cast<double>(n - k);
    if (level == 0.0) throw Error(ErrorKind::precondition, "lagged series mean is zero; RRMSE undefined");
    st.rrmse_lag[k] = std::sqrt(se / m) / (level / m);
  }
  return st;
}

SeriesStats summary_stats_daily(std::span<const double> series, std::optional<std::span<const double>> paired) {
  static constexpr std::array<std::size_t, 2> kLags{1, 7};
  return summary_stats(series, paired, kLags);
}

}  // namespace bikefleet
