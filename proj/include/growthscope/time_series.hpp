#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "growthscope/errors.hpp"

namespace growthscope {

enum class SeriesKind { level, log_level };

// Uniformly sampled series over time measured in years.
struct TimeSeries {
  std::vector<double> times;
  std::vector<double> values;
  SeriesKind kind = SeriesKind::level;
  std::string label;

  std::size_t size() const noexcept { return times.size(); }
  double step() const noexcept { return times[1] - times[0]; }
  double span() const noexcept { return times.back() - times.front(); }
};

// Enforces the TimeSeries invariants; call sites reject bad data before
// any analysis touches it.
inline void validate_series(const TimeSeries& s) {
  if (s.times.size() != s.values.size())
    raise(Errc::malformed_row, "times/values length mismatch");
  if (s.size() < 8)
    raise(Errc::too_few_samples, "need at least 8 samples, got " + std::to_string(s.size()));
  const double dt0 = s.times[1] - s.times[0];
  if (!(dt0 > 0.0)) raise(Errc::non_increasing_times, "times must be strictly increasing");
  for (std::size_t i = 1; i < s.size(); ++i) {
    const double dt = s.times[i] - s.times[i - 1];
    if (!(dt > 0.0)) raise(Errc::non_increasing_times, "at index " + std::to_string(i));
    if (std::abs(dt - dt0) / dt0 > 1e-9)
      raise(Errc::non_uniform_spacing,
            "step " + std::to_string(dt) + " at index " + std::to_string(i) +
                " differs from " + std::to_string(dt0));
  }
  if (s.kind == SeriesKind::level) {
    for (std::size_t i = 0; i < s.size(); ++i) {
      if (!(s.values[i] > 0.0))
        raise(Errc::non_positive_value, "value at index " + std::to_string(i));
    }
  }
  for (double v : s.values) {
    if (!std::isfinite(v)) raise(Errc::malformed_row, "non-finite value");
  }
}

inline TimeSeries log_transform(const TimeSeries& s) {
  if (s.kind != SeriesKind::level) raise(Errc::already_log, "series is already log-level");
  validate_series(s);
  TimeSeries out;
  out.times = s.times;
  out.values.reserve(s.size());
  for (double v : s.values) out.values.push_back(std::log(v));
  out.kind = SeriesKind::log_level;
  out.label = s.label;
  return out;
}

// Restrict to [t0, t1] inclusive; used by windowed pipeline runs.
inline TimeSeries slice_window(const TimeSeries& s, double t0, double t1) {
  TimeSeries out;
  out.kind = s.kind;
  out.label = s.label;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s.times[i] >= t0 - 1e-12 && s.times[i] <= t1 + 1e-12) {
      out.times.push_back(s.times[i]);
      out.values.push_back(s.values[i]);
    }
  }
  validate_series(out);
  return out;
}

}  // namespace growthscope
