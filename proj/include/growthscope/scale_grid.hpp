#pragma once

#include <algorithm>
#include <cmath>
#include <set>
#include <vector>

#include "growthscope/errors.hpp"

namespace growthscope {

// Scales the figures and tables refer to by name: 3, 6, 9, 15, 18, 30 months
// and 1, 2, 4, 8 years.
inline const std::vector<double>& named_scales() {
  static const std::vector<double> s = {0.25, 0.5, 0.75, 1.0, 1.25, 1.5, 2.0, 2.5, 4.0, 8.0};
  return s;
}

struct ScaleGrid {
  std::vector<double> scales;  // years, strictly increasing

  std::size_t size() const noexcept { return scales.size(); }

  // Exact-match lookup; the named scales are injected exactly so golden
  // tests can index them without tolerance gymnastics.
  std::size_t index_of(double scale) const {
    for (std::size_t i = 0; i < scales.size(); ++i)
      if (scales[i] == scale || std::abs(scales[i] - scale) <= 1e-12 * scale) return i;
    raise(Errc::scale_not_in_grid, "scale " + std::to_string(scale));
  }

  bool contains(double scale) const {
    for (double s : scales)
      if (s == scale || std::abs(s - scale) <= 1e-12 * scale) return true;
    return false;
  }
};

// A scale must resolve at least one sampling step and leave room for the
// kernel inside a quarter of the span.
inline void validate_grid(const ScaleGrid& grid, double dt, double span) {
  if (grid.scales.empty()) raise(Errc::grid_incompatible, "empty grid");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double s = grid.scales[i];
    if (!(s > 0.0)) raise(Errc::non_positive_scale, std::to_string(s));
    if (i > 0 && !(s > grid.scales[i - 1]))
      raise(Errc::grid_incompatible, "scales not strictly increasing");
    if (s < dt * (1.0 - 1e-12))
      raise(Errc::grid_incompatible, "scale " + std::to_string(s) + " below sampling step");
    if (s > span / 4.0 * (1.0 + 1e-12))
      raise(Errc::grid_incompatible, "scale " + std::to_string(s) + " above span/4");
  }
}

// Log-spaced grid, `per_octave` scales per factor of two, from 2*dt up to
// span/4, with the named scales injected exactly wherever realizable.
inline ScaleGrid make_default_grid(double dt, double span, int per_octave = 16) {
  if (!(dt > 0.0) || !(span > 0.0)) raise(Errc::grid_incompatible, "bad dt/span");
  const double smin = 2.0 * dt;
  const double smax = span / 4.0;
  if (!(smin <= smax)) raise(Errc::grid_incompatible, "span too short for any scale");
  std::set<double> acc;
  for (int k = 0;; ++k) {
    const double s = smin * std::pow(2.0, static_cast<double>(k) / per_octave);
    if (s > smax * (1.0 + 1e-12)) break;
    acc.insert(s);
  }
  for (double s : named_scales()) {
    if (s >= dt * (1.0 - 1e-12) && s <= smax * (1.0 + 1e-12)) acc.insert(s);
  }
  ScaleGrid grid{std::vector<double>(acc.begin(), acc.end())};
  validate_grid(grid, dt, span);
  return grid;
}

// MIN:MAX:PER_OCTAVE override from the CLI.
inline ScaleGrid make_grid(double smin, double smax, int per_octave, double dt, double span) {
  if (!(smin > 0.0) || !(smax >= smin) || per_octave < 1)
    raise(Errc::grid_incompatible, "bad grid spec");
  std::set<double> acc;
  for (int k = 0;; ++k) {
    const double s = smin * std::pow(2.0, static_cast<double>(k) / per_octave);
    if (s > smax * (1.0 + 1e-12)) break;
    acc.insert(s);
  }
  acc.insert(smax);
  for (double s : named_scales()) {
    if (s >= smin * (1.0 - 1e-12) && s <= smax * (1.0 + 1e-12)) acc.insert(s);
  }
  ScaleGrid grid{std::vector<double>(acc.begin(), acc.end())};
  validate_grid(grid, dt, span);
  return grid;
}

}  // namespace growthscope
