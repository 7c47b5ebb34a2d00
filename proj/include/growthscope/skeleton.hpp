#pragma once

#include <algorithm>
#include <cstddef>
#include <ostream>
#include <tuple>
#include <vector>

#include <json.hpp>

#include "growthscope/errors.hpp"
#include "growthscope/wavelet.hpp"

namespace growthscope {

enum class ExtremumKind { crest, valley };

inline const char* extremum_kind_name(ExtremumKind k) {
  return k == ExtremumKind::crest ? "crest" : "valley";
}

struct SkeletonPoint {
  double time;
  double scale;
  double rho;
  ExtremumKind kind;
  std::size_t scale_index;
  std::size_t time_index;
};

struct SkeletonLine {
  ExtremumKind kind;
  std::vector<SkeletonPoint> points;  // ascending scale, adjacent grid scales
};

struct SkeletonSet {
  std::vector<SkeletonLine> lines;
  ScaleGrid source_grid;

  std::size_t total_points() const {
    std::size_t n = 0;
    for (const auto& l : lines) n += l.points.size();
    return n;
  }
};

// Strict local extrema of one scale row in the time direction. Plateau runs
// of equal values collapse to a single point at the run midpoint (floor).
inline std::vector<SkeletonPoint> extract_extrema(const WaveletField& field, double scale,
                                                  CoiPolicy policy = CoiPolicy::exclude) {
  const std::size_t si = field.grid.index_of(scale);
  const double* row = field.row(si);
  const std::size_t n = field.n_times();
  std::vector<SkeletonPoint> out;
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && row[j + 1] == row[i]) ++j;
    if (i > 0 && j < n - 1) {
      const std::size_t mid = (i + j) / 2;
      const bool valid = policy == CoiPolicy::include || field.coi_at(si, mid);
      if (valid) {
        ExtremumKind kind{};
        bool is_extremum = false;
        if (row[i - 1] < row[i] && row[j + 1] < row[j]) {
          kind = ExtremumKind::crest;
          is_extremum = true;
        } else if (row[i - 1] > row[i] && row[j + 1] > row[j]) {
          kind = ExtremumKind::valley;
          is_extremum = true;
        }
        if (is_extremum)
          out.push_back({field.times[mid], field.grid.scales[si], row[mid], kind, si, mid});
      }
    }
    i = j + 1;
  }
  return out;
}

// Greedy nearest-in-time matching from each scale to the next larger one,
// same kind only, accepted iff |dt| <= max(grid time step, 0.5 * scale).
// Unmatched extrema start new lines; every extremum lands in exactly one line.
inline SkeletonSet link_lines(const WaveletField& field,
                              const std::vector<std::vector<SkeletonPoint>>& per_scale) {
  SkeletonSet set;
  set.source_grid = field.grid;
  if (per_scale.empty()) return set;
  const double dt = field.n_times() > 1 ? field.times[1] - field.times[0] : 0.0;

  std::vector<long> line_of_prev;  // index into set.lines for points at level li-1
  for (std::size_t li = 0; li < per_scale.size(); ++li) {
    const auto& cur = per_scale[li];
    std::vector<long> line_of_cur(cur.size(), -1);
    if (li == 0) {
      for (std::size_t ci = 0; ci < cur.size(); ++ci) {
        set.lines.push_back({cur[ci].kind, {cur[ci]}});
        line_of_cur[ci] = static_cast<long>(set.lines.size() - 1);
      }
    } else {
      const auto& prev = per_scale[li - 1];
      const double tol = std::max(dt, 0.5 * field.grid.scales[li]) + 1e-12;
      // (distance, prev time index, cur time index, prev pos, cur pos)
      std::vector<std::tuple<double, std::size_t, std::size_t, std::size_t, std::size_t>> cands;
      for (std::size_t pi = 0; pi < prev.size(); ++pi) {
        for (std::size_t ci = 0; ci < cur.size(); ++ci) {
          if (prev[pi].kind != cur[ci].kind) continue;
          const double d = std::abs(cur[ci].time - prev[pi].time);
          if (d <= tol)
            cands.emplace_back(d, prev[pi].time_index, cur[ci].time_index, pi, ci);
        }
      }
      std::sort(cands.begin(), cands.end());
      std::vector<bool> used_prev(prev.size(), false), used_cur(cur.size(), false);
      for (const auto& [d, tp, tc, pi, ci] : cands) {
        if (used_prev[pi] || used_cur[ci]) continue;
        used_prev[pi] = true;
        used_cur[ci] = true;
        const long lid = line_of_prev[pi];
        set.lines[static_cast<std::size_t>(lid)].points.push_back(cur[ci]);
        line_of_cur[ci] = lid;
      }
      for (std::size_t ci = 0; ci < cur.size(); ++ci) {
        if (line_of_cur[ci] < 0) {
          set.lines.push_back({cur[ci].kind, {cur[ci]}});
          line_of_cur[ci] = static_cast<long>(set.lines.size() - 1);
        }
      }
    }
    line_of_prev = std::move(line_of_cur);
  }
  return set;
}

inline SkeletonSet extract_skeleton(const WaveletField& field,
                                    CoiPolicy policy = CoiPolicy::exclude) {
  std::vector<std::vector<SkeletonPoint>> per_scale;
  per_scale.reserve(field.n_scales());
  for (double s : field.grid.scales) per_scale.push_back(extract_extrema(field, s, policy));
  return link_lines(field, per_scale);
}

// The (time, rho) samples where skeleton lines cross the horizontal line at
// s_star, ordered by time. Lines without a point at s_star are skipped.
inline std::vector<SkeletonPoint> intercepts_at_scale(const SkeletonSet& set, double s_star) {
  const std::size_t si = set.source_grid.index_of(s_star);
  std::vector<SkeletonPoint> out;
  for (const auto& line : set.lines) {
    for (const auto& p : line.points) {
      if (p.scale_index == si) out.push_back(p);
    }
  }
  std::sort(out.begin(), out.end(),
            [](const SkeletonPoint& a, const SkeletonPoint& b) { return a.time < b.time; });
  return out;
}

inline nlohmann::ordered_json skeleton_to_json(const SkeletonSet& set) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& line : set.lines) {
    nlohmann::ordered_json jl;
    jl["kind"] = extremum_kind_name(line.kind);
    nlohmann::ordered_json pts = nlohmann::ordered_json::array();
    for (const auto& p : line.points) {
      nlohmann::ordered_json jp;
      jp["t"] = p.time;
      jp["s"] = p.scale;
      jp["rho"] = p.rho;
      pts.push_back(std::move(jp));
    }
    jl["points"] = std::move(pts);
    arr.push_back(std::move(jl));
  }
  return arr;
}

inline void write_skeleton_json(std::ostream& os, const SkeletonSet& set) {
  os << skeleton_to_json(set).dump(2) << '\n';
  if (!os) raise(Errc::write_failure, "skeleton json");
}

}  // namespace growthscope
