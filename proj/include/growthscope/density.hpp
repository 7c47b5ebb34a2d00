#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <optional>
#include <ostream>
#include <vector>

#include <json.hpp>

#include "growthscope/detail/format.hpp"
#include "growthscope/errors.hpp"
#include "growthscope/skeleton.hpp"
#include "growthscope/wavelet.hpp"

namespace growthscope {

enum class DensitySource { full_field, skeleton };

inline const char* density_source_name(DensitySource s) {
  return s == DensitySource::full_field ? "full_field" : "skeleton";
}

// Gaussian-kernel density of growth rates at one scale.
struct GrowthDensity {
  double scale = 0.0;
  DensitySource source = DensitySource::full_field;
  std::vector<double> grid;  // growth-rate values, uniform step bandwidth/20
  std::vector<double> pdf;
  double bandwidth = 0.0;
};

inline GrowthDensity kde(const std::vector<double>& samples, double bandwidth) {
  if (samples.empty()) raise(Errc::empty_samples, "kde");
  if (!(bandwidth > 0.0)) raise(Errc::non_positive_bandwidth, std::to_string(bandwidth));
  const auto [mn_it, mx_it] = std::minmax_element(samples.begin(), samples.end());
  const double lo = *mn_it - 5.0 * bandwidth;
  const double hi = *mx_it + 5.0 * bandwidth;
  const double step = bandwidth / 20.0;
  const auto m = static_cast<std::size_t>(std::ceil((hi - lo) / step - 1e-9));
  GrowthDensity d;
  d.bandwidth = bandwidth;
  d.grid.resize(m + 1);
  d.pdf.assign(m + 1, 0.0);
  for (std::size_t j = 0; j <= m; ++j) d.grid[j] = lo + static_cast<double>(j) * step;
  const double norm =
      1.0 / (static_cast<double>(samples.size()) * bandwidth * std::numbers::sqrt2 *
             std::sqrt(std::numbers::pi));
  for (std::size_t j = 0; j <= m; ++j) {
    double acc = 0.0;
    for (double x : samples) {
      const double z = (d.grid[j] - x) / bandwidth;
      acc += std::exp(-0.5 * z * z);
    }
    d.pdf[j] = acc * norm;
  }
  return d;
}

struct Mode {
  double location;
  double height;
  double prominence;
};

// Strict local maxima of the pdf with topographic prominence: height minus
// the higher of the two bases (minimum between the peak and the next
// strictly higher ground on each side, or the grid border).
inline std::vector<Mode> find_modes(const GrowthDensity& d, double prominence_floor) {
  const auto& pdf = d.pdf;
  const std::size_t n = pdf.size();
  std::vector<Mode> out;
  if (n < 3) return out;
  const double mx = *std::max_element(pdf.begin(), pdf.end());
  for (std::size_t j = 1; j + 1 < n; ++j) {
    if (!(pdf[j] > pdf[j - 1] && pdf[j] > pdf[j + 1])) continue;
    double lmin = std::numeric_limits<double>::infinity();
    for (std::ptrdiff_t i = static_cast<std::ptrdiff_t>(j) - 1; i >= 0; --i) {
      if (pdf[static_cast<std::size_t>(i)] > pdf[j]) break;
      lmin = std::min(lmin, pdf[static_cast<std::size_t>(i)]);
    }
    double rmin = std::numeric_limits<double>::infinity();
    for (std::size_t i = j + 1; i < n; ++i) {
      if (pdf[i] > pdf[j]) break;
      rmin = std::min(rmin, pdf[i]);
    }
    const double prominence = pdf[j] - std::max(lmin, rmin);
    if (prominence >= prominence_floor * mx) out.push_back({d.grid[j], pdf[j], prominence});
  }
  return out;
}

struct RegimePeaks {
  double rho_low = 0.0;
  std::optional<double> rho_high;
  double prominence_low = 0.0;
  std::optional<double> prominence_high;

  double dominant() const {
    if (rho_high && *prominence_high > prominence_low) return *rho_high;
    return rho_low;
  }
};

// The two most prominent modes at the 5% prominence floor, ordered by
// location; a single qualifying mode is a unimodal verdict.
inline RegimePeaks regime_peaks(const GrowthDensity& d, double prominence_floor = 0.05) {
  std::vector<Mode> modes = find_modes(d, prominence_floor);
  RegimePeaks out;
  if (modes.empty()) raise(Errc::numeric_failure, "density has no qualifying mode");
  std::sort(modes.begin(), modes.end(), [](const Mode& a, const Mode& b) {
    if (a.prominence != b.prominence) return a.prominence > b.prominence;
    return a.location < b.location;
  });
  if (modes.size() == 1) {
    out.rho_low = modes[0].location;
    out.prominence_low = modes[0].prominence;
    return out;
  }
  Mode a = modes[0], b = modes[1];
  if (a.location > b.location) std::swap(a, b);
  out.rho_low = a.location;
  out.prominence_low = a.prominence;
  out.rho_high = b.location;
  out.prominence_high = b.prominence;
  return out;
}

struct ConditionalStats {
  double quantile_value;
  double conditional_mean_above;
};

// Empirical quantile with linear interpolation between order statistics and
// the mean of samples strictly above it.
inline ConditionalStats conditional_stats(const std::vector<double>& samples, double quantile) {
  if (samples.size() < 2) raise(Errc::too_few_samples, "conditional_stats");
  if (!(quantile > 0.0 && quantile < 1.0))
    raise(Errc::degenerate_samples, "quantile outside (0,1)");
  std::vector<double> xs(samples);
  std::sort(xs.begin(), xs.end());
  if (xs.front() == xs.back()) raise(Errc::degenerate_samples, "all samples equal");
  const double pos = static_cast<double>(xs.size() - 1) * quantile;
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, xs.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  const double qv = xs[lo] * (1.0 - frac) + xs[hi] * frac;
  double sum = 0.0;
  std::size_t cnt = 0;
  for (double x : xs) {
    if (x > qv) {
      sum += x;
      ++cnt;
    }
  }
  if (cnt == 0) raise(Errc::degenerate_samples, "no samples above the quantile");
  return {qv, sum / static_cast<double>(cnt)};
}

inline double skewness(const std::vector<double>& samples) {
  if (samples.size() < 3) raise(Errc::too_few_samples, "skewness");
  double mean = 0.0;
  for (double x : samples) mean += x;
  mean /= static_cast<double>(samples.size());
  double m2 = 0.0, m3 = 0.0;
  for (double x : samples) {
    const double d = x - mean;
    m2 += d * d;
    m3 += d * d * d;
  }
  m2 /= static_cast<double>(samples.size());
  m3 /= static_cast<double>(samples.size());
  return m3 / std::pow(m2, 1.5);
}

// Growth-rate samples for one scale row, one sample per grid cell.
inline std::vector<double> field_samples(const WaveletField& field, double scale,
                                         CoiPolicy policy = CoiPolicy::exclude) {
  const std::size_t si = field.grid.index_of(scale);
  std::vector<double> out;
  for (std::size_t ti = 0; ti < field.n_times(); ++ti) {
    if (policy == CoiPolicy::include || field.coi_at(si, ti)) out.push_back(field.at(si, ti));
  }
  return out;
}

inline std::vector<double> skeleton_samples(const SkeletonSet& set, double scale) {
  std::vector<double> out;
  for (const auto& p : intercepts_at_scale(set, scale)) out.push_back(p.rho);
  return out;
}

inline GrowthDensity density_at_scale(const WaveletField& field, double scale, double bandwidth,
                                      CoiPolicy policy = CoiPolicy::exclude) {
  GrowthDensity d = kde(field_samples(field, scale, policy), bandwidth);
  d.scale = scale;
  d.source = DensitySource::full_field;
  return d;
}

inline GrowthDensity skeleton_density_at_scale(const SkeletonSet& set, double scale,
                                               double bandwidth) {
  GrowthDensity d = kde(skeleton_samples(set, scale), bandwidth);
  d.scale = scale;
  d.source = DensitySource::skeleton;
  return d;
}

inline void write_density_csv(std::ostream& os, const GrowthDensity& d) {
  os << "rho_per_year,pdf\n";
  for (std::size_t i = 0; i < d.grid.size(); ++i)
    os << detail::format_double(d.grid[i]) << ',' << detail::format_double(d.pdf[i]) << '\n';
  if (!os) raise(Errc::write_failure, "density csv");
}

// Per-scale regime entries plus the long-term OLS rate.
struct RegimeSummary {
  struct Entry {
    double scale;
    RegimePeaks full_field;
    std::optional<RegimePeaks> skeleton;
  };
  std::vector<Entry> entries;
  double rho_lt = 0.0;
};

inline nlohmann::ordered_json regime_summary_to_json(const RegimeSummary& summary) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& e : summary.entries) {
    nlohmann::ordered_json je;
    je["scale_years"] = e.scale;
    je["rho_low"] = e.full_field.rho_low;
    je["rho_high"] = e.full_field.rho_high ? nlohmann::ordered_json(*e.full_field.rho_high)
                                           : nlohmann::ordered_json(nullptr);
    je["prominence_low"] = e.full_field.prominence_low;
    je["prominence_high"] = e.full_field.prominence_high
                                ? nlohmann::ordered_json(*e.full_field.prominence_high)
                                : nlohmann::ordered_json(nullptr);
    if (e.skeleton) {
      je["skeleton_rho_low"] = e.skeleton->rho_low;
      je["skeleton_rho_high"] = e.skeleton->rho_high
                                    ? nlohmann::ordered_json(*e.skeleton->rho_high)
                                    : nlohmann::ordered_json(nullptr);
    }
    arr.push_back(std::move(je));
  }
  nlohmann::ordered_json doc;
  doc["rho_lt"] = summary.rho_lt;
  doc["scales"] = std::move(arr);
  return doc;
}

}  // namespace growthscope
