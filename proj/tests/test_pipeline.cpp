#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <sys/wait.h>

#include "growthscope/pipeline.hpp"

using namespace growthscope;
using Catch::Approx;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& name) {
  fs::path p = fs::temp_directory_path() / name;
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

PipelineConfig quarterly_config(const fs::path& out) {
  PipelineConfig cfg;
  cfg.input = fixture_path("quarterly_rgdppc_1947_2015.csv");
  cfg.date_convention = DateConvention::year_quarter;
  cfg.out_dir = out;
  return cfg;
}

// Minimal JSON-schema subset validator: type / required / properties /
// items / enum, which is everything report.schema.json uses.
bool schema_check(const nlohmann::json& value, const nlohmann::json& schema, std::string& err,
                  const std::string& where = "$") {
  if (schema.contains("enum")) {
    for (const auto& v : schema["enum"])
      if (v == value) return true;
    err = where + ": not in enum";
    return false;
  }
  if (schema.contains("type")) {
    auto matches = [&](const std::string& t) {
      if (t == "object") return value.is_object();
      if (t == "array") return value.is_array();
      if (t == "string") return value.is_string();
      if (t == "integer") return value.is_number_integer();
      if (t == "number") return value.is_number();
      if (t == "boolean") return value.is_boolean();
      if (t == "null") return value.is_null();
      return false;
    };
    bool ok = false;
    if (schema["type"].is_string()) {
      ok = matches(schema["type"].get<std::string>());
    } else {
      for (const auto& t : schema["type"]) ok = ok || matches(t.get<std::string>());
    }
    if (!ok) {
      err = where + ": type mismatch";
      return false;
    }
  }
  if (value.is_object()) {
    if (schema.contains("required")) {
      for (const auto& k : schema["required"]) {
        if (!value.contains(k.get<std::string>())) {
          err = where + ": missing required key " + k.get<std::string>();
          return false;
        }
      }
    }
    if (schema.contains("properties")) {
      for (auto it = schema["properties"].begin(); it != schema["properties"].end(); ++it) {
        if (value.contains(it.key())) {
          if (!schema_check(value[it.key()], it.value(), err, where + "." + it.key()))
            return false;
        }
      }
    }
  }
  if (value.is_array() && schema.contains("items")) {
    for (std::size_t i = 0; i < value.size(); ++i) {
      if (!schema_check(value[i], schema["items"], err, where + "[" + std::to_string(i) + "]"))
        return false;
    }
  }
  return true;
}

}  // namespace

TEST_CASE("pipeline produces the full artifact set with stable headline numbers") {
  fs::path out = fresh_dir("gs_pipe_a");
  PipelineResult res = run_pipeline(quarterly_config(out));

  REQUIRE(res.trend.rho_lt == Approx(0.020).margin(0.002));
  REQUIRE(res.trend.r_squared > 0.98);

  for (const char* name : {"scalogram.csv", "skeleton.json", "regime_summary.json",
                           "report.json", "scalogram.svg", "skeleton.svg", "densities.svg",
                           "synthetic.svg"}) {
    INFO(name);
    REQUIRE(fs::exists(out / name));
  }
  REQUIRE(fs::exists(out / "density_0p5y_full_field.csv"));
  REQUIRE(fs::exists(out / "density_0p5y_skeleton.csv"));
  REQUIRE(fs::exists(out / "synthetic_1y.csv"));

  SECTION("report validates against the shipped schema") {
    nlohmann::json report = nlohmann::json::parse(slurp(out / "report.json"));
    nlohmann::json schema =
        nlohmann::json::parse(slurp(fs::path(GROWTHSCOPE_SCHEMA_DIR) / "report.schema.json"));
    std::string err;
    bool ok = schema_check(report, schema, err);
    INFO(err);
    REQUIRE(ok);
  }

  SECTION("repeated runs are byte-identical") {
    fs::path out2 = fresh_dir("gs_pipe_b");
    PipelineConfig cfg2 = quarterly_config(out2);
    run_pipeline(cfg2);
    std::size_t compared = 0;
    for (const auto& entry : fs::directory_iterator(out)) {
      const auto name = entry.path().filename();
      if (name == "report.json") {
        // differs only in the echoed output directory
        auto a = nlohmann::json::parse(slurp(entry.path()));
        auto b = nlohmann::json::parse(slurp(out2 / name));
        a["config"].erase("out");
        b["config"].erase("out");
        REQUIRE(a == b);
      } else {
        INFO(name.string());
        REQUIRE(slurp(entry.path()) == slurp(out2 / name));
      }
      ++compared;
    }
    REQUIRE(compared >= 10);
  }
}

TEST_CASE("windowed runs reuse the identical pipeline") {
  fs::path out = fresh_dir("gs_pipe_win");
  PipelineConfig cfg = quarterly_config(out);
  cfg.window = std::make_pair(1950.0, 2007.0);
  PipelineResult res = run_pipeline(cfg);
  REQUIRE(res.trend.rho_lt == Approx(0.021).margin(0.004));
  REQUIRE(fs::exists(out / "report.json"));
}

TEST_CASE("unreadable input leaves no partial outputs and maps to a data error") {
  fs::path out = fresh_dir("gs_pipe_err");
  PipelineConfig cfg = quarterly_config(out);
  cfg.input = "/nonexistent/missing.csv";
  try {
    run_pipeline(cfg);
    FAIL("expected an error");
  } catch (const Error& e) {
    REQUIRE(exit_code_for(e.code()) == 2);
  }
  REQUIRE(!fs::exists(out));
}

TEST_CASE("pdf scales outside the grid are a configuration error") {
  fs::path out = fresh_dir("gs_pipe_badscale");
  PipelineConfig cfg = quarterly_config(out);
  cfg.pdf_scales = {7.77};
  try {
    run_pipeline(cfg);
    FAIL("expected ScaleNotInGrid");
  } catch (const Error& e) {
    REQUIRE(e.code() == Errc::scale_not_in_grid);
    REQUIRE(exit_code_for(e.code()) == 1);
  }
}

TEST_CASE("config file parsing and flag precedence") {
  fs::path ini = fs::temp_directory_path() / "gs_cfg.ini";
  {
    std::ofstream os(ini);
    os << "# reproduction recipe\n"
       << "input = data/quarterly_rgdppc_1947_2015.csv\n"
       << "dates = year_quarter\n"
       << "bandwidth = 0.004\n"
       << "coi = include\n"
       << "no-figures = true\n";
  }
  PipelineConfig cfg;
  for (const auto& [k, v] : parse_config_file(ini)) apply_config_entry(cfg, k, v);
  REQUIRE(cfg.bandwidth == 0.004);
  REQUIRE(cfg.coi == CoiPolicy::include);
  REQUIRE(cfg.no_figures);
  // flags override file values
  apply_config_entry(cfg, "bandwidth", "0.001");
  REQUIRE(cfg.bandwidth == 0.001);

  SECTION("unknown keys are rejected") {
    try {
      apply_config_entry(cfg, "bandwith", "0.002");
      FAIL("expected InvalidConfig");
    } catch (const Error& e) {
      REQUIRE(e.code() == Errc::invalid_config);
      REQUIRE(exit_code_for(e.code()) == 1);
    }
  }
  SECTION("bad values are rejected") {
    REQUIRE_THROWS_AS(apply_config_entry(cfg, "scales", "1:2"), Error);
    REQUIRE_THROWS_AS(apply_config_entry(cfg, "dates", "monthly"), Error);
    REQUIRE_THROWS_AS(apply_config_entry(cfg, "window", "1950-2007"), Error);
  }
}

TEST_CASE("wavelet mean at the largest valid scale agrees with the OLS trend") {
  TimeSeries level = load_series(fixture_path("quarterly_rgdppc_1947_2015.csv"),
                                 DateConvention::year_quarter);
  TimeSeries logs = log_transform(level);
  ScaleGrid grid = make_default_grid(logs.step(), logs.span());
  WaveletField field = cwt_slope(logs, grid);
  TrendFit fit = ols_loggrowth(logs);
  for (std::size_t si = grid.size(); si-- > 0;) {
    std::vector<double> samples = field_samples(field, grid.scales[si]);
    if (samples.empty()) continue;
    double mean = 0.0;
    for (double v : samples) mean += v;
    mean /= static_cast<double>(samples.size());
    REQUIRE(std::abs(mean - fit.rho_lt) <= 0.003);
    break;
  }
}

TEST_CASE("annual fixture: skeleton census and sample-shape regressions") {
  TimeSeries level = load_series(fixture_path("annual_rgdppc_1800_2010.csv"),
                                 DateConvention::year_only);
  TimeSeries logs = log_transform(level);
  ScaleGrid grid = make_default_grid(logs.step(), logs.span());
  WaveletField field = cwt_slope(logs, grid);
  SkeletonSet skeleton = extract_skeleton(field);

  auto intercepts = intercepts_at_scale(skeleton, 1.0);
  REQUIRE(intercepts.size() >= 30);   // "several dozens"
  REQUIRE(intercepts.size() <= 90);
  std::size_t alternating = 0;
  for (std::size_t i = 1; i < intercepts.size(); ++i)
    if (intercepts[i].kind != intercepts[i - 1].kind) ++alternating;
  REQUIRE(static_cast<double>(alternating) /
              static_cast<double>(intercepts.size() - 1) >= 0.80);

  REQUIRE(skewness(field_samples(field, 1.0)) > 0.0);
  REQUIRE(skewness(field_samples(field, 2.0)) > 0.0);
}

TEST_CASE("figure generation edge cases") {
  SECTION("linear signal gives a uniform-color cone") {
    TimeSeries s;
    s.kind = SeriesKind::log_level;
    for (int i = 0; i < 276; ++i) {
      s.times.push_back(1947.0 + 0.25 * i);
      s.values.push_back(0.02 * (1947.0 + 0.25 * i));
    }
    ScaleGrid grid = make_default_grid(s.step(), s.span());
    WaveletField field = cwt_slope(s, grid);
    TrendFit fit = ols_loggrowth(s);
    std::ostringstream os;
    svg::emit_scalogram(os, field, s, fit);
    const std::string body = os.str();
    // count rect fills; the in-cone cells all map to the palette center
    std::map<std::string, int> fills;
    std::size_t pos = 0;
    while ((pos = body.find("fill=\"rgb(", pos)) != std::string::npos) {
      std::size_t end = body.find(')', pos);
      fills[body.substr(pos + 6, end - pos - 5)]++;
      pos = end;
    }
    int total = 0, top = 0;
    for (const auto& [color, n] : fills) {
      total += n;
      top = std::max(top, n);
    }
    REQUIRE(top > total / 2);
  }
  SECTION("empty skeleton still renders a valid figure") {
    // exactly-constant rows: plateaus carry no strict extrema
    WaveletField field;
    field.grid.scales = {1.0, 2.0};
    for (int i = 0; i < 64; ++i) field.times.push_back(0.25 * i);
    field.coeffs.assign(2 * 64, 0.02);
    field.coi.assign(2 * 64, 1);
    SkeletonSet set = extract_skeleton(field);
    REQUIRE(set.lines.empty());
    TimeSeries s;
    s.kind = SeriesKind::log_level;
    for (int i = 0; i < 64; ++i) {
      s.times.push_back(0.25 * i);
      s.values.push_back(0.02 * 0.25 * i);
    }
    std::ostringstream os;
    svg::emit_skeleton(os, set, field, ols_loggrowth(s));
    const std::string body = os.str();
    REQUIRE(body.find("<svg") != std::string::npos);
    REQUIRE(body.rfind("</svg>") != std::string::npos);
    REQUIRE(body.find("stroke=\"rgb") == std::string::npos);  // no skeleton segments
  }
}

#ifdef GROWTHSCOPE_CLI_PATH
TEST_CASE("CLI exit statuses") {
  const std::string cli = GROWTHSCOPE_CLI_PATH;
  fs::path out = fresh_dir("gs_cli_out");
  const std::string base = cli + " analyze --input " +
                           fixture_path("quarterly_rgdppc_1947_2015.csv").string() +
                           " --dates year_quarter --no-figures --out " + out.string();
  int rc = std::system((base + " > /dev/null 2>&1").c_str());
  REQUIRE(WEXITSTATUS(rc) == 0);
  REQUIRE(fs::exists(out / "report.json"));

  rc = std::system((cli + " analyze --input /nonexistent.csv --dates year_only --out " +
                    out.string() + " > /dev/null 2>&1")
                       .c_str());
  REQUIRE(WEXITSTATUS(rc) == 2);

  rc = std::system((cli + " analyze --dates nonsense --input x --out y > /dev/null 2>&1").c_str());
  REQUIRE(WEXITSTATUS(rc) == 1);
}
#endif
