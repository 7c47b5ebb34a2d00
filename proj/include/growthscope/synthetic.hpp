#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <ostream>
#include <utility>
#include <vector>

#include "growthscope/detail/format.hpp"
#include "growthscope/errors.hpp"
#include "growthscope/time_series.hpp"

namespace growthscope {

// Synthetic GDP trajectory recompounded from skeleton growth rates at one
// scale: value(t_k) = gdp0 * prod_{i<=k} (1 + g_i)^(t_i - t_{i-1}).
struct SyntheticSeries {
  TimeSeries series;  // kind = level, first point (t0, gdp0)
  double s_star = 0.0;
  double gdp0 = 0.0;
  double t0 = 0.0;
};

inline SyntheticSeries synthetic_gdp(const std::vector<std::pair<double, double>>& intercepts,
                                     double gdp0, double t0, double s_star) {
  if (!(gdp0 > 0.0)) raise(Errc::non_positive_value, "gdp0");
  SyntheticSeries out;
  out.s_star = s_star;
  out.gdp0 = gdp0;
  out.t0 = t0;
  out.series.kind = SeriesKind::level;
  out.series.times.push_back(t0);
  out.series.values.push_back(gdp0);
  double prev_t = t0;
  double value = gdp0;
  for (const auto& [t, g] : intercepts) {
    if (!(t > prev_t)) raise(Errc::non_increasing_times, "intercept at " + std::to_string(t));
    if (!(1.0 + g > 0.0)) raise(Errc::growth_below_minus_one, std::to_string(g));
    value *= std::pow(1.0 + g, t - prev_t);
    out.series.times.push_back(t);
    out.series.values.push_back(value);
    prev_t = t;
  }
  return out;
}

struct ReconstructionError {
  std::vector<std::pair<double, double>> per_point;  // (time, |ln(synth/actual)|)
  double median_abs_log_ratio = 0.0;                 // all points
  double max_abs_log_ratio = 0.0;
  std::optional<std::pair<double, double>> exclusion_window;
  double median_excluding = 0.0;  // points outside the window
  double max_excluding = 0.0;
};

namespace detail {

inline double median_of(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace detail

// Per-point |ln(synthetic / actual)| with the actual series interpolated
// linearly in log-level at the synthetic times.
inline ReconstructionError reconstruction_error(
    const SyntheticSeries& synth, const TimeSeries& actual,
    std::optional<std::pair<double, double>> exclusion_window = std::nullopt) {
  if (actual.kind != SeriesKind::level)
    raise(Errc::kind_mismatch, "reconstruction_error expects a level series");
  if (synth.series.times.front() < actual.times.front() - 1e-9 ||
      synth.series.times.back() > actual.times.back() + 1e-9)
    raise(Errc::span_mismatch, "synthetic times outside the actual span");

  ReconstructionError out;
  out.exclusion_window = exclusion_window;
  std::vector<double> all, kept;
  for (std::size_t k = 0; k < synth.series.size(); ++k) {
    const double t = synth.series.times[k];
    auto it = std::lower_bound(actual.times.begin(), actual.times.end(), t);
    std::size_t j = static_cast<std::size_t>(it - actual.times.begin());
    double log_actual;
    if (j == 0) {
      log_actual = std::log(actual.values.front());
    } else if (j >= actual.size()) {
      log_actual = std::log(actual.values.back());
    } else {
      const double t1 = actual.times[j - 1], t2 = actual.times[j];
      const double y1 = std::log(actual.values[j - 1]), y2 = std::log(actual.values[j]);
      log_actual = t2 == t1 ? y1 : y1 + (y2 - y1) * (t - t1) / (t2 - t1);
    }
    const double err = std::abs(std::log(synth.series.values[k]) - log_actual);
    out.per_point.emplace_back(t, err);
    all.push_back(err);
    const bool excluded =
        exclusion_window && t >= exclusion_window->first && t <= exclusion_window->second;
    if (!excluded) kept.push_back(err);
  }
  out.median_abs_log_ratio = detail::median_of(all);
  out.max_abs_log_ratio = all.empty() ? 0.0 : *std::max_element(all.begin(), all.end());
  out.median_excluding = detail::median_of(kept);
  out.max_excluding = kept.empty() ? 0.0 : *std::max_element(kept.begin(), kept.end());
  return out;
}

inline void write_synthetic_csv(std::ostream& os, const SyntheticSeries& synth) {
  os << "time_years,value\n";
  for (std::size_t i = 0; i < synth.series.size(); ++i)
    os << detail::format_double(synth.series.times[i]) << ','
       << detail::format_double(synth.series.values[i]) << '\n';
  if (!os) raise(Errc::write_failure, "synthetic csv");
}

}  // namespace growthscope
