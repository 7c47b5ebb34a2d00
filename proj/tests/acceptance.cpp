// Acceptance suite: runs every release criterion at its stated tolerance and
// prints one PASS/FAIL line per criterion. Exit status is the failure count.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "growthscope/density.hpp"
#include "growthscope/ingest.hpp"
#include "growthscope/pipeline.hpp"
#include "growthscope/skeleton.hpp"
#include "growthscope/synthetic.hpp"
#include "growthscope/trend.hpp"
#include "growthscope/wavelet.hpp"

using namespace growthscope;
namespace fs = std::filesystem;

namespace {

int g_failures = 0;

void report(bool ok, const std::string& name, const std::string& detail = "") {
  std::printf("%s — %s%s%s\n", ok ? "PASS" : "FAIL", name.c_str(),
              detail.empty() ? "" : ": ", detail.c_str());
  if (!ok) ++g_failures;
}

std::string num(double v, int prec = 4) { return detail::format_fixed(v, prec); }

TimeSeries linear_series(double p, double t0, double dt, std::size_t n) {
  TimeSeries s;
  s.kind = SeriesKind::log_level;
  for (std::size_t i = 0; i < n; ++i) {
    const double t = t0 + dt * static_cast<double>(i);
    s.times.push_back(t);
    s.values.push_back(p * t);
  }
  return s;
}

struct Fixture {
  TimeSeries level;
  TimeSeries logs;
  ScaleGrid grid;
  WaveletField field;
  SkeletonSet skeleton;
  TrendFit trend;
};

Fixture load_fixture(const std::string& name, DateConvention conv) {
  Fixture f;
  f.level = load_series(fixture_path(name), conv);
  f.logs = log_transform(f.level);
  f.grid = make_default_grid(f.logs.step(), f.logs.span());
  f.field = cwt_slope(f.logs, f.grid);
  f.skeleton = extract_skeleton(f.field);
  f.trend = ols_loggrowth(f.logs);
  return f;
}

double max_coi_error(const WaveletField& f,
                     const std::function<double(double, double)>& ref) {
  double worst = 0.0;
  for (std::size_t si = 0; si < f.n_scales(); ++si)
    for (std::size_t ti = 0; ti < f.n_times(); ++ti)
      if (f.coi_at(si, ti))
        worst = std::max(worst, std::abs(f.at(si, ti) - ref(f.grid.scales[si], f.times[ti])));
  return worst;
}

RegimePeaks peaks_at(const Fixture& f, double scale, double bandwidth = 0.002) {
  GrowthDensity d = density_at_scale(f.field, scale, bandwidth);
  return regime_peaks(d);
}

}  // namespace

int main() {
  // 1. slope calibration
  {
    double worst = 0.0;
    for (double p : {-0.05, 0.001, 0.02}) {
      TimeSeries s = linear_series(p, 1947.0, 0.25, 276);
      WaveletField f = cwt_slope(s, make_default_grid(s.step(), s.span()));
      worst = std::max(worst, max_coi_error(f, [p](double, double) { return p; }));
    }
    report(worst <= 1e-6, "slope calibration within 1e-6 for p in {-0.05, 0.001, 0.02}",
           "max error " + num(worst, 10));
  }

  // 2. constant-signal null
  {
    TimeSeries s = linear_series(0.0, 1947.0, 0.25, 276);
    for (auto& v : s.values) v = 5.0;
    WaveletField f = cwt_slope(s, make_default_grid(s.step(), s.span()));
    double worst = 0.0;
    for (double c : f.coeffs) worst = std::max(worst, std::abs(c));
    report(worst <= 1e-12, "constant signal maps to |rho| <= 1e-12",
           "max |rho| " + num(worst, 16));
  }

  // 3. oracle equivalence on 64-point fixture slices
  {
    double worst = 0.0;
    for (const auto& [name, conv] :
         {std::make_pair(std::string("quarterly_rgdppc_1947_2015.csv"),
                         DateConvention::year_quarter),
          std::make_pair(std::string("annual_rgdppc_1800_2010.csv"), DateConvention::year_only)}) {
      TimeSeries logs = log_transform(load_series(fixture_path(name), conv));
      TimeSeries s;
      s.kind = SeriesKind::log_level;
      s.times.assign(logs.times.begin(), logs.times.begin() + 64);
      s.values.assign(logs.values.begin(), logs.values.begin() + 64);
      ScaleGrid grid = make_default_grid(s.step(), s.span());
      WaveletField fast = cwt_slope(s, grid);
      WaveletField direct = direct_cwt_reference(s, grid);
      for (std::size_t si = 0; si < fast.n_scales(); ++si)
        for (std::size_t ti = 0; ti < fast.n_times(); ++ti)
          if (fast.coi_at(si, ti))
            worst = std::max(worst, std::abs(fast.at(si, ti) - direct.at(si, ti)));
    }
    report(worst <= 1e-9, "fast transform matches the direct O(N^2) reference within 1e-9",
           "max difference " + num(worst, 12));
  }

  // 4. sinusoid closed form
  {
    const double w = 2.0 * std::numbers::pi;
    TimeSeries s;
    s.kind = SeriesKind::log_level;
    for (int i = 0; i < 513; ++i) {
      const double t = 0.125 * i;
      s.times.push_back(t);
      s.values.push_back(std::sin(w * t));
    }
    WaveletField f = cwt_slope(s, make_default_grid(s.step(), s.span()));
    const double worst = max_coi_error(f, [w](double scale, double t) {
      return w * std::cos(w * t) * std::exp(-0.5 * scale * scale * w * w);
    });
    report(worst <= 1e-4, "sin(2 pi t) matches w cos(w t) exp(-s^2 w^2 / 2) within 1e-4",
           "max error " + num(worst, 7));
  }

  Fixture q = load_fixture("quarterly_rgdppc_1947_2015.csv", DateConvention::year_quarter);
  Fixture a = load_fixture("annual_rgdppc_1800_2010.csv", DateConvention::year_only);

  // 5. long-term rates
  report(std::abs(q.trend.rho_lt - 0.020) <= 0.002,
         "quarterly rho_lt = 0.020 +- 0.002", "got " + num(q.trend.rho_lt));
  report(std::abs(a.trend.rho_lt - 0.016) <= 0.002,
         "annual rho_lt = 0.016 +- 0.002", "got " + num(a.trend.rho_lt));

  // 6. quarterly bimodal peaks
  {
    const double want_lo[] = {0.010, 0.011, 0.015};
    const double want_hi[] = {0.031, 0.028, 0.028};
    const double scales[] = {0.5, 0.75, 1.25};
    for (int i = 0; i < 3; ++i) {
      RegimePeaks p = peaks_at(q, scales[i]);
      const bool ok = p.rho_high.has_value() &&
                      std::abs(p.rho_low - want_lo[i]) <= 0.003 &&
                      std::abs(*p.rho_high - want_hi[i]) <= 0.003;
      std::ostringstream det;
      det << "got (" << num(p.rho_low) << ", "
          << (p.rho_high ? num(*p.rho_high) : std::string("none")) << ") want ("
          << num(want_lo[i]) << ", " << num(want_hi[i]) << ") +- 0.003";
      report(ok, "quarterly peaks at " + detail::format_double(scales[i]) + " y", det.str());
    }
    RegimePeaks p30 = peaks_at(q, 2.5);
    report(std::abs(p30.dominant() - 0.020) <= 0.003,
           "quarterly 30-month dominant mode = 0.020 +- 0.003", "got " + num(p30.dominant()));
  }

  // 7. annual peaks
  {
    const double want_lo[] = {0.002, 0.010, 0.012};
    const double want_hi[] = {0.014, 0.019, 0.018};
    const double scales[] = {1.0, 2.0, 4.0};
    for (int i = 0; i < 3; ++i) {
      RegimePeaks p = peaks_at(a, scales[i]);
      const bool ok = p.rho_high.has_value() &&
                      std::abs(p.rho_low - want_lo[i]) <= 0.004 &&
                      std::abs(*p.rho_high - want_hi[i]) <= 0.004;
      std::ostringstream det;
      det << "got (" << num(p.rho_low) << ", "
          << (p.rho_high ? num(*p.rho_high) : std::string("none")) << ") want ("
          << num(want_lo[i]) << ", " << num(want_hi[i]) << ") +- 0.004";
      report(ok, "annual peaks at " + detail::format_double(scales[i]) + " y", det.str());
    }
  }

  // 8. annual quantile statistics at the 1-year scale
  {
    std::vector<double> samples = field_samples(a.field, 1.0);
    ConditionalStats cs = conditional_stats(samples, 0.5);
    report(std::abs(cs.quantile_value - 0.013) <= 0.003,
           "annual 1-year median growth = 0.013 +- 0.003", "got " + num(cs.quantile_value));
    report(std::abs(cs.conditional_mean_above - 0.033) <= 0.005,
           "annual 1-year conditional mean above the median = 0.033 +- 0.005",
           "got " + num(cs.conditional_mean_above));
  }

  // 9. skeleton-sourced densities agree with full-field densities
  {
    for (double s : {0.5, 0.75}) {
      RegimePeaks pf = peaks_at(q, s);
      GrowthDensity ds = skeleton_density_at_scale(q.skeleton, s, 0.002);
      RegimePeaks pk = regime_peaks(ds);
      const bool ok = pf.rho_high.has_value() && pk.rho_high.has_value() &&
                      std::abs(pf.rho_low - pk.rho_low) <= 0.005 &&
                      std::abs(*pf.rho_high - *pk.rho_high) <= 0.005;
      std::ostringstream det;
      det << "field (" << num(pf.rho_low) << ", "
          << (pf.rho_high ? num(*pf.rho_high) : std::string("none")) << ") skeleton ("
          << num(pk.rho_low) << ", " << (pk.rho_high ? num(*pk.rho_high) : std::string("none"))
          << ")";
      report(ok, "skeleton vs field peaks within 0.005 at " + detail::format_double(s) + " y",
             det.str());
    }
  }

  // 10. bandwidth robustness
  {
    for (double s : {0.5, 0.75}) {
      RegimePeaks base = peaks_at(q, s);
      bool ok = base.rho_high.has_value();
      std::ostringstream det;
      for (double bw : {0.001, 0.004}) {
        RegimePeaks p = peaks_at(q, s, bw);
        const bool here = p.rho_high.has_value() &&
                          std::abs(p.rho_low - base.rho_low) < 0.005 &&
                          std::abs(*p.rho_high - *base.rho_high) < 0.005;
        det << "bw " << detail::format_double(bw) << " -> (" << num(p.rho_low) << ", "
            << (p.rho_high ? num(*p.rho_high) : std::string("none")) << ") ";
        ok = ok && here;
      }
      report(ok, "peak locations move < 0.005 under half/double bandwidth at " +
                     detail::format_double(s) + " y",
             det.str());
    }
  }

  // 11. synthetic reconstruction across scales
  {
    double lo = 1e300, hi = -1e300;
    bool all_ok = true;
    std::ostringstream det;
    for (double s : {1.0, 2.0, 4.0, 8.0}) {
      std::vector<std::pair<double, double>> ic;
      for (const auto& p : intercepts_at_scale(a.skeleton, s)) ic.emplace_back(p.time, p.rho);
      SyntheticSeries synth =
          synthetic_gdp(ic, a.level.values.front(), a.level.times.front(), s);
      ReconstructionError err =
          reconstruction_error(synth, a.level, std::make_pair(1940.0, 1955.0));
      det << "s*=" << detail::format_double(s) << " median " << num(err.median_excluding, 3)
          << "; ";
      all_ok = all_ok && err.median_excluding <= 0.10;
      lo = std::min(lo, err.median_excluding);
      hi = std::max(hi, err.median_excluding);
    }
    const double spread = hi - lo;
    det << "spread " << num(spread, 3);
    report(all_ok && spread < 0.05,
           "synthetic GDP: median |ln ratio| (excl. 1940-1955) <= 0.10, spread < 0.05 over s* in "
           "{1,2,4,8} y",
           det.str());
  }

  // 12. determinism of the full pipeline
  {
    auto run_into = [&](const fs::path& out) {
      PipelineConfig cfg;
      cfg.input = fixture_path("quarterly_rgdppc_1947_2015.csv");
      cfg.date_convention = DateConvention::year_quarter;
      cfg.out_dir = out;
      run_pipeline(cfg);
    };
    fs::path d1 = fs::temp_directory_path() / "gs_acc_run1";
    fs::path d2 = fs::temp_directory_path() / "gs_acc_run2";
    fs::remove_all(d1);
    fs::remove_all(d2);
    run_into(d1);
    run_into(d2);
    bool identical = true;
    std::string offender;
    for (const auto& entry : fs::directory_iterator(d1)) {
      const auto name = entry.path().filename();
      std::ifstream f1(entry.path(), std::ios::binary), f2(d2 / name, std::ios::binary);
      std::ostringstream s1, s2;
      s1 << f1.rdbuf();
      s2 << f2.rdbuf();
      std::string a1 = s1.str(), a2 = s2.str();
      if (name == "report.json") {
        auto ja = nlohmann::json::parse(a1), jb = nlohmann::json::parse(a2);
        ja["config"].erase("out");
        jb["config"].erase("out");
        if (ja != jb) {
          identical = false;
          offender = name.string();
        }
        continue;
      }
      if (a1 != a2 || a1.empty()) {
        identical = false;
        offender = name.string();
      }
    }
    report(identical, "repeated pipeline runs are byte-identical",
           identical ? "all artifacts match" : "mismatch in " + offender);
  }

  if (g_failures == 0) std::printf("all acceptance criteria passed\n");
  else std::printf("%d acceptance criterion(s) failed\n", g_failures);
  return g_failures;
}
