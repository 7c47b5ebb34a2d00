#pragma once

#include <cstddef>

#include "growthscope/errors.hpp"
#include "growthscope/time_series.hpp"

namespace growthscope {

struct TrendFit {
  double rho_lt = 0.0;      // 1/years
  double intercept = 0.0;   // log-level at time 0
  double r_squared = 0.0;
};

// Ordinary least squares of log-level against time. Time is centered at its
// mean for conditioning; the reported intercept is de-centered.
inline TrendFit ols_loggrowth(const TimeSeries& series) {
  if (series.kind != SeriesKind::log_level)
    raise(Errc::kind_mismatch, "ols_loggrowth expects a log-level series");
  if (series.size() < 3) raise(Errc::too_few_samples, std::to_string(series.size()));
  const std::size_t n = series.size();
  double tbar = 0.0, ybar = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    tbar += series.times[i];
    ybar += series.values[i];
  }
  tbar /= static_cast<double>(n);
  ybar /= static_cast<double>(n);
  double stt = 0.0, sty = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dtc = series.times[i] - tbar;
    const double dy = series.values[i] - ybar;
    stt += dtc * dtc;
    sty += dtc * dy;
    syy += dy * dy;
  }
  TrendFit fit;
  fit.rho_lt = sty / stt;
  fit.intercept = ybar - fit.rho_lt * tbar;
  double ss_res = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double resid = series.values[i] - (fit.intercept + fit.rho_lt * series.times[i]);
    ss_res += resid * resid;
  }
  fit.r_squared = syy > 0.0 ? 1.0 - ss_res / syy : 1.0;
  return fit;
}

}  // namespace growthscope
