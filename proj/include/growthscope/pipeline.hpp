#pragma once

#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "growthscope/density.hpp"
#include "growthscope/detail/format.hpp"
#include "growthscope/errors.hpp"
#include "growthscope/ingest.hpp"
#include "growthscope/skeleton.hpp"
#include "growthscope/svg.hpp"
#include "growthscope/synthetic.hpp"
#include "growthscope/trend.hpp"
#include "growthscope/wavelet.hpp"

namespace growthscope {

struct PipelineConfig {
  std::filesystem::path input;
  DateConvention date_convention = DateConvention::year_decimal;
  double scale_min = 0.0;        // 0 = automatic (2*dt)
  double scale_max = 0.0;        // 0 = automatic (span/4)
  int scales_per_octave = 16;
  std::vector<double> pdf_scales;        // empty = realizable named scales
  double bandwidth = 0.002;
  double prominence_floor = 0.05;
  CoiPolicy coi = CoiPolicy::exclude;
  std::vector<double> synthetic_scales;  // empty = {1,2,4,8} intersect grid
  double exclusion_start = 1940.0;
  double exclusion_end = 1955.0;
  std::optional<std::pair<double, double>> window;
  std::filesystem::path out_dir;
  bool no_figures = false;

  void validate() const {
    if (!(bandwidth > 0.0)) raise(Errc::invalid_config, "bandwidth must be positive");
    if (!(prominence_floor >= 0.0 && prominence_floor < 1.0))
      raise(Errc::invalid_config, "prominence floor must lie in [0,1)");
    if (scales_per_octave < 1) raise(Errc::invalid_config, "scales per octave must be >= 1");
    if (scale_min < 0.0 || scale_max < 0.0 || (scale_max != 0.0 && scale_max < scale_min))
      raise(Errc::invalid_config, "bad scale range");
    for (double s : pdf_scales)
      if (!(s > 0.0)) raise(Errc::invalid_config, "pdf scale must be positive");
    for (double s : synthetic_scales)
      if (!(s > 0.0)) raise(Errc::invalid_config, "synthetic scale must be positive");
    if (!(exclusion_end >= exclusion_start))
      raise(Errc::invalid_config, "exclusion window end before start");
    if (window && !(window->second > window->first))
      raise(Errc::invalid_config, "analysis window end before start");
    if (out_dir.empty()) raise(Errc::invalid_config, "output directory required");
    if (input.empty()) raise(Errc::invalid_config, "input path required");
  }
};

// Flat key=value config file; '#' starts a comment. Keys mirror the CLI flags.
inline std::map<std::string, std::string> parse_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) raise(Errc::invalid_config, "cannot open config " + path.string());
  std::map<std::string, std::string> kv;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::string_view sv = detail::trim(line);
    if (sv.empty()) continue;
    auto eq = sv.find('=');
    if (eq == std::string_view::npos)
      raise(Errc::invalid_config, "config line " + std::to_string(lineno) + ": expected key=value");
    std::string key(detail::trim(sv.substr(0, eq)));
    std::string value(detail::trim(sv.substr(eq + 1)));
    if (key.empty()) raise(Errc::invalid_config, "config line " + std::to_string(lineno));
    kv[key] = value;
  }
  return kv;
}

namespace detail {

inline std::vector<double> parse_scale_list(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    double v;
    if (!parse_double(trim(tok), v)) raise(Errc::invalid_config, "bad scale list '" + s + "'");
    out.push_back(v);
  }
  return out;
}

inline std::string scale_tag(double s) {
  std::string t = format_double(s);
  for (char& c : t)
    if (c == '.') c = 'p';
  return t;
}

}  // namespace detail

// Applies file values onto defaults; CLI flags are layered on top by the tool.
inline void apply_config_entry(PipelineConfig& cfg, const std::string& key,
                               const std::string& value) {
  auto need_double = [&](const std::string& v) {
    double d;
    if (!detail::parse_double(v, d)) raise(Errc::invalid_config, key + ": bad number '" + v + "'");
    return d;
  };
  if (key == "input") {
    cfg.input = value;
  } else if (key == "dates") {
    if (value == "year_decimal") cfg.date_convention = DateConvention::year_decimal;
    else if (value == "year_quarter") cfg.date_convention = DateConvention::year_quarter;
    else if (value == "year_only") cfg.date_convention = DateConvention::year_only;
    else raise(Errc::invalid_config, "dates: unknown convention '" + value + "'");
  } else if (key == "scales") {
    std::stringstream ss(value);
    std::string a, b, c;
    if (!std::getline(ss, a, ':') || !std::getline(ss, b, ':') || !std::getline(ss, c, ':'))
      raise(Errc::invalid_config, "scales: expected MIN:MAX:PER_OCTAVE");
    cfg.scale_min = need_double(a);
    cfg.scale_max = need_double(b);
    cfg.scales_per_octave = static_cast<int>(need_double(c));
  } else if (key == "pdf-scales") {
    cfg.pdf_scales = detail::parse_scale_list(value);
  } else if (key == "bandwidth") {
    cfg.bandwidth = need_double(value);
  } else if (key == "prominence-floor") {
    cfg.prominence_floor = need_double(value);
  } else if (key == "coi") {
    if (value == "exclude") cfg.coi = CoiPolicy::exclude;
    else if (value == "include") cfg.coi = CoiPolicy::include;
    else raise(Errc::invalid_config, "coi: expected exclude|include");
  } else if (key == "synthetic-scales") {
    cfg.synthetic_scales = detail::parse_scale_list(value);
  } else if (key == "exclusion-window") {
    auto colon = value.find(':');
    if (colon == std::string::npos) raise(Errc::invalid_config, "exclusion-window: YYYY:YYYY");
    cfg.exclusion_start = need_double(value.substr(0, colon));
    cfg.exclusion_end = need_double(value.substr(colon + 1));
  } else if (key == "window") {
    auto colon = value.find(':');
    if (colon == std::string::npos) raise(Errc::invalid_config, "window: YYYY:YYYY");
    cfg.window = std::make_pair(need_double(value.substr(0, colon)),
                                need_double(value.substr(colon + 1)));
  } else if (key == "out") {
    cfg.out_dir = value;
  } else if (key == "no-figures") {
    cfg.no_figures = value == "true" || value == "1" || value == "yes";
  } else {
    raise(Errc::invalid_config, "unknown config key '" + key + "'");
  }
}

struct PipelineResult {
  TrendFit trend;
  RegimeSummary regimes;
  nlohmann::ordered_json report;
  std::vector<std::filesystem::path> written;
};

inline nlohmann::ordered_json config_echo_json(const PipelineConfig& cfg) {
  nlohmann::ordered_json j;
  j["input"] = cfg.input.string();
  j["dates"] = date_convention_name(cfg.date_convention);
  j["scale_min"] = cfg.scale_min;
  j["scale_max"] = cfg.scale_max;
  j["scales_per_octave"] = cfg.scales_per_octave;
  j["pdf_scales"] = cfg.pdf_scales;
  j["bandwidth"] = cfg.bandwidth;
  j["prominence_floor"] = cfg.prominence_floor;
  j["coi"] = cfg.coi == CoiPolicy::exclude ? "exclude" : "include";
  j["synthetic_scales"] = cfg.synthetic_scales;
  j["exclusion_window"] = {cfg.exclusion_start, cfg.exclusion_end};
  if (cfg.window) j["window"] = {cfg.window->first, cfg.window->second};
  else j["window"] = nullptr;
  j["out"] = cfg.out_dir.string();
  j["no_figures"] = cfg.no_figures;
  return j;
}

// The end-to-end run: ingest -> wavelet -> skeleton -> density -> trend ->
// synthetic, with all file artifacts. Throws Error; the CLI maps codes to
// exit statuses. Nothing is written until the input has loaded cleanly.
inline PipelineResult run_pipeline(const PipelineConfig& cfg) {
  cfg.validate();

  TimeSeries level = load_series(cfg.input, cfg.date_convention);
  std::string raw_bytes;
  {
    std::ifstream in(cfg.input, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    raw_bytes = ss.str();
  }
  if (cfg.window) level = slice_window(level, cfg.window->first, cfg.window->second);
  TimeSeries logs = log_transform(level);

  const double dt = logs.step(), span = logs.span();
  ScaleGrid grid = (cfg.scale_min > 0.0 && cfg.scale_max > 0.0)
                       ? make_grid(cfg.scale_min, cfg.scale_max, cfg.scales_per_octave, dt, span)
                       : make_default_grid(dt, span, cfg.scales_per_octave);

  WaveletField field = cwt_slope(logs, grid);
  TrendFit trend = ols_loggrowth(logs);
  SkeletonSet skeleton = extract_skeleton(field, cfg.coi);

  auto has_valid_samples = [&](double s) {
    return !field_samples(field, s, cfg.coi).empty();
  };
  std::vector<double> pdf_scales = cfg.pdf_scales;
  if (pdf_scales.empty()) {
    for (double s : named_scales())
      if (grid.contains(s) && has_valid_samples(s)) pdf_scales.push_back(s);
  } else {
    for (double s : pdf_scales)
      if (!grid.contains(s)) raise(Errc::scale_not_in_grid, "pdf scale " + std::to_string(s));
  }
  std::vector<double> synth_scales = cfg.synthetic_scales;
  if (synth_scales.empty()) {
    for (double s : {1.0, 2.0, 4.0, 8.0})
      if (grid.contains(s) && has_valid_samples(s)) synth_scales.push_back(s);
  } else {
    for (double s : synth_scales)
      if (!grid.contains(s)) raise(Errc::scale_not_in_grid, "synthetic scale " + std::to_string(s));
  }

  std::filesystem::create_directories(cfg.out_dir);
  PipelineResult result;
  result.trend = trend;

  auto open_out = [&](const std::string& name) {
    std::filesystem::path p = cfg.out_dir / name;
    result.written.push_back(p);
    return std::ofstream(p, std::ios::binary);
  };

  {
    auto os = open_out("scalogram.csv");
    write_scalogram_csv(os, field);
  }
  {
    auto os = open_out("skeleton.json");
    write_skeleton_json(os, skeleton);
  }

  RegimeSummary summary;
  summary.rho_lt = trend.rho_lt;
  std::vector<GrowthDensity> field_densities, skeleton_densities;
  nlohmann::ordered_json quantile_stats = nlohmann::ordered_json::array();
  for (double s : pdf_scales) {
    GrowthDensity df = density_at_scale(field, s, cfg.bandwidth, cfg.coi);
    {
      auto os = open_out("density_" + detail::scale_tag(s) + "y_full_field.csv");
      write_density_csv(os, df);
    }
    RegimeSummary::Entry entry;
    entry.scale = s;
    entry.full_field = regime_peaks(df, cfg.prominence_floor);
    std::vector<double> skel_samples_v = skeleton_samples(skeleton, s);
    if (!skel_samples_v.empty()) {
      GrowthDensity ds = skeleton_density_at_scale(skeleton, s, cfg.bandwidth);
      {
        auto os = open_out("density_" + detail::scale_tag(s) + "y_skeleton.csv");
        write_density_csv(os, ds);
      }
      entry.skeleton = regime_peaks(ds, cfg.prominence_floor);
      skeleton_densities.push_back(std::move(ds));
    }
    summary.entries.push_back(std::move(entry));
    field_densities.push_back(std::move(df));

    std::vector<double> samples = field_samples(field, s, cfg.coi);
    nlohmann::ordered_json qj;
    qj["scale_years"] = s;
    qj["quantile"] = 0.5;
    try {
      ConditionalStats cs = conditional_stats(samples, 0.5);
      qj["quantile_value"] = cs.quantile_value;
      qj["conditional_mean_above"] = cs.conditional_mean_above;
      qj["skewness"] = skewness(samples);
    } catch (const Error&) {
      qj["quantile_value"] = nullptr;
      qj["conditional_mean_above"] = nullptr;
      qj["skewness"] = nullptr;
    }
    quantile_stats.push_back(std::move(qj));
  }
  {
    auto os = open_out("regime_summary.json");
    os << regime_summary_to_json(summary).dump(2) << '\n';
  }
  result.regimes = summary;

  nlohmann::ordered_json synth_report = nlohmann::ordered_json::array();
  std::vector<SyntheticSeries> synth_list;
  for (double s : synth_scales) {
    std::vector<std::pair<double, double>> ic;
    for (const auto& p : intercepts_at_scale(skeleton, s)) ic.emplace_back(p.time, p.rho);
    SyntheticSeries synth =
        synthetic_gdp(ic, level.values.front(), level.times.front(), s);
    {
      auto os = open_out("synthetic_" + detail::scale_tag(s) + "y.csv");
      write_synthetic_csv(os, synth);
    }
    ReconstructionError err = reconstruction_error(
        synth, level, std::make_pair(cfg.exclusion_start, cfg.exclusion_end));
    nlohmann::ordered_json js;
    js["s_star_years"] = s;
    js["n_intercepts"] = ic.size();
    js["median_abs_log_ratio"] = err.median_abs_log_ratio;
    js["max_abs_log_ratio"] = err.max_abs_log_ratio;
    js["median_abs_log_ratio_excluding"] = err.median_excluding;
    js["max_abs_log_ratio_excluding"] = err.max_excluding;
    js["exclusion_window"] = {cfg.exclusion_start, cfg.exclusion_end};
    synth_report.push_back(std::move(js));
    synth_list.push_back(std::move(synth));
  }

  nlohmann::ordered_json report;
  report["config"] = config_echo_json(cfg);
  {
    nlohmann::ordered_json ji;
    ji["path"] = cfg.input.string();
    ji["checksum_fnv1a64"] = detail::fnv1a64_hex(raw_bytes);
    ji["rows"] = level.size();
    ji["label"] = level.label;
    ji["time_start"] = level.times.front();
    ji["time_end"] = level.times.back();
    report["input"] = std::move(ji);
  }
  {
    nlohmann::ordered_json jt;
    jt["rho_lt"] = trend.rho_lt;
    jt["intercept"] = trend.intercept;
    jt["r_squared"] = trend.r_squared;
    report["trend"] = std::move(jt);
  }
  report["regimes"] = regime_summary_to_json(summary);
  report["quantile_stats"] = std::move(quantile_stats);
  report["synthetic"] = std::move(synth_report);
  {
    auto os = open_out("report.json");
    os << report.dump(2) << '\n';
    if (!os) raise(Errc::write_failure, "report.json");
  }
  result.report = std::move(report);

  if (!cfg.no_figures) {
    {
      auto os = open_out("scalogram.svg");
      svg::emit_scalogram(os, field, logs, trend);
    }
    {
      auto os = open_out("skeleton.svg");
      svg::emit_skeleton(os, skeleton, field, trend);
    }
    {
      auto os = open_out("densities.svg");
      svg::emit_densities(os, field_densities, skeleton_densities);
    }
    {
      auto os = open_out("synthetic.svg");
      svg::emit_synthetic(os, level, synth_list);
    }
  }
  return result;
}

// CLI exit statuses: 1 config, 2 data, 3 numeric.
inline int exit_code_for(Errc code) {
  switch (code) {
    case Errc::invalid_config:
    case Errc::grid_incompatible:
    case Errc::scale_not_in_grid:
    case Errc::non_positive_bandwidth:
    case Errc::non_positive_scale:
      return 1;
    case Errc::numeric_failure:
      return 3;
    default:
      return 2;
  }
}

}  // namespace growthscope
