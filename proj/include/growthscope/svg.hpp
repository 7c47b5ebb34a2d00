#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <ostream>
#include <string>
#include <vector>

#include "growthscope/density.hpp"
#include "growthscope/detail/format.hpp"
#include "growthscope/skeleton.hpp"
#include "growthscope/synthetic.hpp"
#include "growthscope/time_series.hpp"
#include "growthscope/trend.hpp"
#include "growthscope/wavelet.hpp"

namespace growthscope::svg {

namespace impl {

using detail::format_fixed;

inline std::string px(double v) { return format_fixed(v, 2); }

// Pixel frame with y growing upward in data space.
struct Frame {
  double x0, x1, y0, y1;      // data bounds
  double left, top, w, h;     // pixel viewport

  double X(double x) const { return left + (x - x0) / (x1 - x0) * w; }
  double Y(double y) const { return top + (1.0 - (y - y0) / (y1 - y0)) * h; }
};

inline void open_svg(std::ostream& os, double w, double h) {
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << px(w) << "\" height=\""
     << px(h) << "\" viewBox=\"0 0 " << px(w) << ' ' << px(h) << "\">\n"
     << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
}

inline void close_svg(std::ostream& os) { os << "</svg>\n"; }

inline void frame_border(std::ostream& os, const Frame& f) {
  os << "<rect x=\"" << px(f.left) << "\" y=\"" << px(f.top) << "\" width=\"" << px(f.w)
     << "\" height=\"" << px(f.h) << "\" fill=\"none\" stroke=\"black\" stroke-width=\"1\"/>\n";
}

inline void text(std::ostream& os, double x, double y, const std::string& s, int size = 11,
                 const std::string& anchor = "middle", const std::string& fill = "black") {
  os << "<text x=\"" << px(x) << "\" y=\"" << px(y) << "\" font-size=\"" << size
     << "\" font-family=\"Helvetica, Arial, sans-serif\" text-anchor=\"" << anchor
     << "\" fill=\"" << fill << "\">" << s << "</text>\n";
}

inline void hline(std::ostream& os, double x1, double x2, double y, const std::string& stroke,
                  const std::string& extra = "") {
  os << "<line x1=\"" << px(x1) << "\" y1=\"" << px(y) << "\" x2=\"" << px(x2) << "\" y2=\""
     << px(y) << "\" stroke=\"" << stroke << "\" " << extra << "/>\n";
}

struct Rgb {
  double r, g, b;
};

inline Rgb lerp(const Rgb& a, const Rgb& b, double t) {
  return {a.r + (b.r - a.r) * t, a.g + (b.g - a.g) * t, a.b + (b.b - a.b) * t};
}

inline std::string css(const Rgb& c) {
  auto ch = [](double v) {
    int i = static_cast<int>(v + 0.5);
    return std::clamp(i, 0, 255);
  };
  return "rgb(" + std::to_string(ch(c.r)) + ',' + std::to_string(ch(c.g)) + ',' +
         std::to_string(ch(c.b)) + ')';
}

// Diverging palette: warm for growth rates below the long-term trend, green
// at the trend, cold above it.
inline std::string diverging_color(double value, double center, double halfspan) {
  const Rgb warm{178, 24, 43}, green{27, 120, 55}, cold{33, 102, 172};
  double t = (value - center) / halfspan;
  t = std::clamp(t, -1.0, 1.0);
  return css(t < 0.0 ? lerp(green, warm, -t) : lerp(green, cold, t));
}

inline double coi_std(const WaveletField& field) {
  double mean = 0.0;
  std::size_t n = 0;
  for (std::size_t i = 0; i < field.coeffs.size(); ++i) {
    if (field.coi[i]) {
      mean += field.coeffs[i];
      ++n;
    }
  }
  if (n == 0) return 1.0;
  mean /= static_cast<double>(n);
  double var = 0.0;
  for (std::size_t i = 0; i < field.coeffs.size(); ++i) {
    if (field.coi[i]) {
      const double d = field.coeffs[i] - mean;
      var += d * d;
    }
  }
  return std::sqrt(var / static_cast<double>(n));
}

inline std::vector<double> decade_ticks(double t0, double t1) {
  std::vector<double> ticks;
  double step = 10.0;
  if (t1 - t0 > 120.0) step = 25.0;
  if (t1 - t0 < 25.0) step = 5.0;
  for (double t = std::ceil(t0 / step) * step; t <= t1 + 1e-9; t += step) ticks.push_back(t);
  return ticks;
}

inline std::string percent_label(double rho, int decimals = 1) {
  return format_fixed(rho * 100.0, decimals) + "%";
}

inline const char* cycle_color(std::size_t i) {
  static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                 "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};
  return colors[i % 8];
}

}  // namespace impl

// Fig-1 style heatmap: wavelet coefficients over (time, scale), the input
// log-series and its dashed OLS trend overlaid on a right-hand axis.
inline void emit_scalogram(std::ostream& os, const WaveletField& field, const TimeSeries& logs,
                           const TrendFit& trend) {
  using namespace impl;
  const double W = 960, H = 540;
  Frame f{field.times.front(), field.times.back(),
          std::log2(field.grid.scales.front()), std::log2(field.grid.scales.back()),
          60, 28, W - 140, H - 80};
  open_svg(os, W, H);

  const double sd = coi_std(field);
  const double halfspan = std::max(3.0 * sd, 0.005);
  const std::size_t ns = field.n_scales(), nt = field.n_times();
  for (std::size_t si = 0; si < ns; ++si) {
    const double s = field.grid.scales[si];
    const double ylo = si == 0 ? std::log2(s)
                               : 0.5 * (std::log2(field.grid.scales[si - 1]) + std::log2(s));
    const double yhi = si + 1 == ns
                           ? std::log2(s)
                           : 0.5 * (std::log2(field.grid.scales[si + 1]) + std::log2(s));
    const double ytop = f.Y(yhi), ybot = f.Y(ylo);
    for (std::size_t ti = 0; ti < nt; ++ti) {
      const double t = field.times[ti];
      const double xlo = ti == 0 ? t : 0.5 * (field.times[ti - 1] + t);
      const double xhi = ti + 1 == nt ? t : 0.5 * (field.times[ti + 1] + t);
      os << "<rect x=\"" << px(f.X(xlo)) << "\" y=\"" << px(ytop) << "\" width=\""
         << px(f.X(xhi) - f.X(xlo) + 0.05) << "\" height=\"" << px(ybot - ytop + 0.05)
         << "\" fill=\"" << diverging_color(field.at(si, ti), trend.rho_lt, halfspan) << "\"/>\n";
    }
  }

  // log-series overlay, right axis
  const auto [vmin_it, vmax_it] = std::minmax_element(logs.values.begin(), logs.values.end());
  Frame fr = f;
  fr.y0 = *vmin_it;
  fr.y1 = *vmax_it;
  os << "<polyline fill=\"none\" stroke=\"black\" stroke-width=\"1.4\" points=\"";
  for (std::size_t i = 0; i < logs.size(); ++i)
    os << px(fr.X(logs.times[i])) << ',' << px(fr.Y(logs.values[i])) << ' ';
  os << "\"/>\n";
  os << "<line x1=\"" << px(fr.X(logs.times.front())) << "\" y1=\""
     << px(fr.Y(trend.intercept + trend.rho_lt * logs.times.front())) << "\" x2=\""
     << px(fr.X(logs.times.back())) << "\" y2=\""
     << px(fr.Y(trend.intercept + trend.rho_lt * logs.times.back()))
     << "\" stroke=\"black\" stroke-width=\"1.2\" stroke-dasharray=\"6,4\"/>\n";

  frame_border(os, f);
  for (double t : decade_ticks(f.x0, f.x1)) {
    hline(os, f.X(t), f.X(t), f.top + f.h + 4, "black");
    os << "<line x1=\"" << px(f.X(t)) << "\" y1=\"" << px(f.top + f.h) << "\" x2=\"" << px(f.X(t))
       << "\" y2=\"" << px(f.top + f.h + 4) << "\" stroke=\"black\"/>\n";
    text(os, f.X(t), f.top + f.h + 17, detail::format_double(t), 10);
  }
  for (double s : {0.25, 0.5, 1.0, 2.0, 4.0, 8.0, 16.0}) {
    if (s < field.grid.scales.front() * 0.999 || s > field.grid.scales.back() * 1.001) continue;
    const double y = f.Y(std::log2(s));
    os << "<line x1=\"" << px(f.left - 4) << "\" y1=\"" << px(y) << "\" x2=\"" << px(f.left)
       << "\" y2=\"" << px(y) << "\" stroke=\"black\"/>\n";
    text(os, f.left - 7, y + 3.5, detail::format_double(s), 10, "end");
  }
  text(os, f.left + f.w / 2, H - 12, "time [years]", 12);
  text(os, 16, f.top + f.h / 2, "scale s [years]", 12, "middle",
       "black\" transform=\"rotate(-90 16 " + px(f.top + f.h / 2) + ")");
  text(os, f.left + f.w + 46, f.top + f.h / 2, "ln series", 11, "middle",
       "black\" transform=\"rotate(90 " + px(f.left + f.w + 46) + ' ' + px(f.top + f.h / 2) + ")");

  // color legend
  const double lx = f.left + f.w + 14, ly = f.top, lh = f.h * 0.6;
  for (int i = 0; i <= 60; ++i) {
    const double v = trend.rho_lt + halfspan * (1.0 - i / 30.0);
    os << "<rect x=\"" << px(lx) << "\" y=\"" << px(ly + lh * i / 61.0) << "\" width=\"10\" height=\""
       << px(lh / 61.0 + 0.4) << "\" fill=\"" << diverging_color(v, trend.rho_lt, halfspan)
       << "\"/>\n";
  }
  text(os, lx + 13, ly + 8, "+" + percent_label(trend.rho_lt + halfspan), 9, "start");
  text(os, lx + 13, ly + lh / 2 + 3, percent_label(trend.rho_lt), 9, "start");
  text(os, lx + 13, ly + lh, percent_label(trend.rho_lt - halfspan), 9, "start");
  close_svg(os);
}

// Fig-2 style skeleton: extrema lines in the (time, scale) plane colored by
// their growth rate, with rate labels at the annotation scales.
inline void emit_skeleton(std::ostream& os, const SkeletonSet& set, const WaveletField& field,
                          const TrendFit& trend) {
  using namespace impl;
  const double W = 960, H = 540;
  Frame f{field.times.front(), field.times.back(),
          std::log2(field.grid.scales.front()), std::log2(field.grid.scales.back()),
          60, 28, W - 110, H - 80};
  open_svg(os, W, H);
  const double sd = coi_std(field);
  const double halfspan = std::max(3.0 * sd, 0.005);

  for (const auto& line : set.lines) {
    for (std::size_t i = 1; i < line.points.size(); ++i) {
      const auto& a = line.points[i - 1];
      const auto& b = line.points[i];
      os << "<line x1=\"" << px(f.X(a.time)) << "\" y1=\"" << px(f.Y(std::log2(a.scale)))
         << "\" x2=\"" << px(f.X(b.time)) << "\" y2=\"" << px(f.Y(std::log2(b.scale)))
         << "\" stroke=\"" << diverging_color(a.rho, trend.rho_lt, halfspan)
         << "\" stroke-width=\"1.6\"/>\n";
    }
    if (line.points.size() == 1) {
      const auto& p = line.points.front();
      os << "<circle cx=\"" << px(f.X(p.time)) << "\" cy=\"" << px(f.Y(std::log2(p.scale)))
         << "\" r=\"1.2\" fill=\"" << diverging_color(p.rho, trend.rho_lt, halfspan) << "\"/>\n";
    }
  }

  // growth-rate labels at the annotation scales (nearest grid scale each)
  for (double target : {0.25, 0.5, 1.5, 3.0}) {
    if (target < field.grid.scales.front() * 0.999 || target > field.grid.scales.back() * 1.001)
      continue;
    double best = field.grid.scales.front();
    for (double s : field.grid.scales)
      if (std::abs(std::log2(s) - std::log2(target)) < std::abs(std::log2(best) - std::log2(target)))
        best = s;
    for (const auto& p : intercepts_at_scale(set, best)) {
      text(os, f.X(p.time), f.Y(std::log2(p.scale)) - 3, percent_label(p.rho), 7, "middle",
           p.kind == ExtremumKind::crest ? "#00441b" : "#67001f");
    }
  }

  frame_border(os, f);
  for (double t : decade_ticks(f.x0, f.x1)) {
    os << "<line x1=\"" << px(f.X(t)) << "\" y1=\"" << px(f.top + f.h) << "\" x2=\"" << px(f.X(t))
       << "\" y2=\"" << px(f.top + f.h + 4) << "\" stroke=\"black\"/>\n";
    text(os, f.X(t), f.top + f.h + 17, detail::format_double(t), 10);
  }
  for (double s : {0.25, 0.5, 1.0, 2.0, 4.0, 8.0, 16.0}) {
    if (s < field.grid.scales.front() * 0.999 || s > field.grid.scales.back() * 1.001) continue;
    const double y = f.Y(std::log2(s));
    os << "<line x1=\"" << px(f.left - 4) << "\" y1=\"" << px(y) << "\" x2=\"" << px(f.left)
       << "\" y2=\"" << px(y) << "\" stroke=\"black\"/>\n";
    text(os, f.left - 7, y + 3.5, detail::format_double(s), 10, "end");
  }
  text(os, f.left + f.w / 2, H - 12, "time [years]", 12);
  text(os, 16, f.top + f.h / 2, "scale s [years]", 12, "middle",
       "black\" transform=\"rotate(-90 16 " + px(f.top + f.h / 2) + ")");
  close_svg(os);
}

// Fig-3 style density panels: full-field pdfs in the main frame, skeleton
// pdfs in a top-right inset.
inline void emit_densities(std::ostream& os, const std::vector<GrowthDensity>& field_densities,
                           const std::vector<GrowthDensity>& skeleton_densities) {
  using namespace impl;
  const double W = 960, H = 540;
  open_svg(os, W, H);

  auto bounds = [](const std::vector<GrowthDensity>& ds) {
    double xlo = 1e300, xhi = -1e300, yhi = 0.0;
    for (const auto& d : ds) {
      xlo = std::min(xlo, d.grid.front());
      xhi = std::max(xhi, d.grid.back());
      for (double p : d.pdf) yhi = std::max(yhi, p);
    }
    if (ds.empty()) {
      xlo = -0.05;
      xhi = 0.05;
      yhi = 1.0;
    }
    return std::array<double, 3>{xlo, xhi, yhi};
  };
  auto draw_panel = [&](const Frame& f, const std::vector<GrowthDensity>& ds, int fontsize) {
    auto [xlo, xhi, yhi] = bounds(ds);
    Frame g = f;
    g.x0 = xlo;
    g.x1 = xhi;
    g.y0 = 0.0;
    g.y1 = yhi * 1.05;
    for (std::size_t i = 0; i < ds.size(); ++i) {
      os << "<polyline fill=\"none\" stroke=\"" << cycle_color(i)
         << "\" stroke-width=\"1.5\" points=\"";
      for (std::size_t j = 0; j < ds[i].grid.size(); ++j)
        os << px(g.X(ds[i].grid[j])) << ',' << px(g.Y(ds[i].pdf[j])) << ' ';
      os << "\"/>\n";
    }
    frame_border(os, f);
    const double tick = 0.01;
    for (double x = std::ceil(g.x0 / tick) * tick; x <= g.x1 + 1e-12; x += tick) {
      os << "<line x1=\"" << px(g.X(x)) << "\" y1=\"" << px(f.top + f.h) << "\" x2=\""
         << px(g.X(x)) << "\" y2=\"" << px(f.top + f.h + 3) << "\" stroke=\"black\"/>\n";
      text(os, g.X(x), f.top + f.h + 13, percent_label(x, 0), fontsize);
    }
    return g;
  };

  Frame main{0, 1, 0, 1, 60, 40, W - 100, H - 110};
  draw_panel(main, field_densities, 9);
  text(os, main.left + main.w / 2, H - 24, "annualized growth rate", 12);
  text(os, 16, main.top + main.h / 2, "pdf", 12, "middle",
       "black\" transform=\"rotate(-90 16 " + px(main.top + main.h / 2) + ")");

  // legend, top-left
  for (std::size_t i = 0; i < field_densities.size(); ++i) {
    const double y = main.top + 14 + 14 * static_cast<double>(i);
    os << "<line x1=\"" << px(main.left + 8) << "\" y1=\"" << px(y) << "\" x2=\""
       << px(main.left + 30) << "\" y2=\"" << px(y) << "\" stroke=\"" << cycle_color(i)
       << "\" stroke-width=\"2\"/>\n";
    text(os, main.left + 35, y + 3.5,
         "s = " + detail::format_double(field_densities[i].scale) + " y", 10, "start");
  }

  if (!skeleton_densities.empty()) {
    Frame inset{0, 1, 0, 1, main.left + main.w - 300, main.top + 10, 290, 180};
    os << "<rect x=\"" << px(inset.left) << "\" y=\"" << px(inset.top) << "\" width=\""
       << px(inset.w) << "\" height=\"" << px(inset.h) << "\" fill=\"white\"/>\n";
    draw_panel(inset, skeleton_densities, 7);
    text(os, inset.left + inset.w / 2, inset.top + 12, "skeleton", 10);
  }
  close_svg(os);
}

// Fig-7 style overlay: the actual series and the synthetic trajectories on a
// logarithmic level axis.
inline void emit_synthetic(std::ostream& os, const TimeSeries& actual,
                           const std::vector<SyntheticSeries>& synths) {
  using namespace impl;
  const double W = 960, H = 540;
  double vlo = 1e300, vhi = -1e300;
  for (double v : actual.values) {
    vlo = std::min(vlo, v);
    vhi = std::max(vhi, v);
  }
  for (const auto& s : synths)
    for (double v : s.series.values) {
      vlo = std::min(vlo, v);
      vhi = std::max(vhi, v);
    }
  Frame f{actual.times.front(), actual.times.back(), std::log10(vlo) - 0.02,
          std::log10(vhi) + 0.02, 70, 28, W - 110, H - 80};
  open_svg(os, W, H);

  os << "<polyline fill=\"none\" stroke=\"black\" stroke-width=\"1.6\" points=\"";
  for (std::size_t i = 0; i < actual.size(); ++i)
    os << px(f.X(actual.times[i])) << ',' << px(f.Y(std::log10(actual.values[i]))) << ' ';
  os << "\"/>\n";

  for (std::size_t k = 0; k < synths.size(); ++k) {
    const auto& s = synths[k].series;
    os << "<polyline fill=\"none\" stroke=\"" << cycle_color(k)
       << "\" stroke-width=\"1.2\" points=\"";
    for (std::size_t i = 0; i < s.size(); ++i)
      os << px(f.X(s.times[i])) << ',' << px(f.Y(std::log10(s.values[i]))) << ' ';
    os << "\"/>\n";
    for (std::size_t i = 0; i < s.size(); ++i)
      os << "<circle cx=\"" << px(f.X(s.times[i])) << "\" cy=\""
         << px(f.Y(std::log10(s.values[i]))) << "\" r=\"1.8\" fill=\"" << cycle_color(k)
         << "\"/>\n";
    const double y = f.top + 14 + 14 * static_cast<double>(k);
    os << "<line x1=\"" << px(f.left + 8) << "\" y1=\"" << px(y) << "\" x2=\"" << px(f.left + 30)
       << "\" y2=\"" << px(y) << "\" stroke=\"" << cycle_color(k) << "\" stroke-width=\"2\"/>\n";
    text(os, f.left + 35, y + 3.5, "s* = " + detail::format_double(synths[k].s_star) + " y", 10,
         "start");
  }

  frame_border(os, f);
  for (double t : decade_ticks(f.x0, f.x1)) {
    os << "<line x1=\"" << px(f.X(t)) << "\" y1=\"" << px(f.top + f.h) << "\" x2=\"" << px(f.X(t))
       << "\" y2=\"" << px(f.top + f.h + 4) << "\" stroke=\"black\"/>\n";
    text(os, f.X(t), f.top + f.h + 17, detail::format_double(t), 10);
  }
  for (int e = -6; e <= 9; ++e) {
    for (double m : {1.0, 2.0, 5.0}) {
      const double v = m * std::pow(10.0, e);
      const double ly = std::log10(v);
      if (ly < f.y0 || ly > f.y1) continue;
      os << "<line x1=\"" << px(f.left - 4) << "\" y1=\"" << px(f.Y(ly)) << "\" x2=\""
         << px(f.left) << "\" y2=\"" << px(f.Y(ly)) << "\" stroke=\"black\"/>\n";
      text(os, f.left - 7, f.Y(ly) + 3.5, detail::format_double(v), 10, "end");
    }
  }
  text(os, f.left + f.w / 2, H - 12, "time [years]", 12);
  text(os, 20, f.top + f.h / 2, "level", 12, "middle",
       "black\" transform=\"rotate(-90 20 " + px(f.top + f.h / 2) + ")");
  close_svg(os);
}

}  // namespace growthscope::svg
