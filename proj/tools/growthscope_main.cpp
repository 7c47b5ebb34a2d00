#include <exception>
#include <iostream>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "growthscope/pipeline.hpp"

namespace {

int run_analyze(const std::vector<std::pair<std::string, std::string>>& flag_values,
                const std::string& config_path) {
  growthscope::PipelineConfig cfg;
  try {
    if (!config_path.empty()) {
      for (const auto& [k, v] : growthscope::parse_config_file(config_path))
        growthscope::apply_config_entry(cfg, k, v);
    }
    for (const auto& [k, v] : flag_values) growthscope::apply_config_entry(cfg, k, v);
    growthscope::PipelineResult result = growthscope::run_pipeline(cfg);
    std::cout << "rho_lt = " << growthscope::detail::format_double(result.trend.rho_lt)
              << " per year (r^2 = "
              << growthscope::detail::format_double(result.trend.r_squared) << ")\n";
    std::cout << "wrote " << result.written.size() << " artifacts to " << cfg.out_dir.string()
              << '\n';
    return 0;
  } catch (const growthscope::Error& e) {
    std::cerr << "growthscope: " << e.what() << '\n';
    return growthscope::exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "growthscope: " << e.what() << '\n';
    return 3;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"multiscale growth-rate analysis of GDP per-capita series"};
  app.require_subcommand(1);

  auto* analyze = app.add_subcommand("analyze", "run the full analysis pipeline");
  std::string config_path;
  analyze->add_option("--config", config_path, "key=value config file; flags take precedence");

  // every key is also a config-file key; flags are stored as strings and
  // layered over the file values
  std::map<std::string, std::string> flags;
  auto add = [&](const std::string& name, const std::string& help) {
    analyze->add_option_function<std::string>(
        "--" + name, [&flags, name](const std::string& v) { flags[name] = v; }, help);
  };
  add("input", "input CSV (date,value)");
  add("dates", "date convention: year_only|year_quarter|year_decimal");
  add("scales", "scale grid MIN:MAX:PER_OCTAVE (default: automatic)");
  add("pdf-scales", "comma list of density scales in years");
  add("bandwidth", "KDE bandwidth in growth-rate units (default 0.002)");
  add("prominence-floor", "mode prominence floor as a fraction of the pdf maximum");
  add("coi", "cone-of-influence policy: exclude|include");
  add("synthetic-scales", "comma list of synthetic reconstruction scales");
  add("exclusion-window", "YYYY:YYYY window excluded from reconstruction-error summaries");
  add("window", "YYYY:YYYY restriction of the analysis window");
  add("out", "output directory");
  analyze->add_flag_function(
      "--no-figures", [&flags](std::int64_t) { flags["no-figures"] = "true"; },
      "skip SVG figure generation");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  std::vector<std::pair<std::string, std::string>> ordered(flags.begin(), flags.end());
  return run_analyze(ordered, config_path);
}
