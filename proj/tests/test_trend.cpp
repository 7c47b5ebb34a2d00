#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "growthscope/trend.hpp"

using namespace growthscope;
using Catch::Approx;

namespace {

TimeSeries exact_line(double slope, double intercept, std::size_t n = 40) {
  TimeSeries s;
  s.kind = SeriesKind::log_level;
  for (std::size_t i = 0; i < n; ++i) {
    const double t = 1950.0 + 0.25 * static_cast<double>(i);
    s.times.push_back(t);
    s.values.push_back(slope * t + intercept);
  }
  return s;
}

}  // namespace

TEST_CASE("ols_loggrowth recovers an exact line") {
  TrendFit fit = ols_loggrowth(exact_line(0.02, 5.0));
  REQUIRE(fit.rho_lt == Approx(0.02).margin(1e-12));
  REQUIRE(fit.intercept == Approx(5.0).margin(1e-9));
  REQUIRE(fit.r_squared == Approx(1.0).margin(1e-12));
}

TEST_CASE("level shift changes the intercept only") {
  TimeSeries base = exact_line(0.017, 2.0);
  TimeSeries noisy = base;
  for (std::size_t i = 0; i < noisy.size(); ++i)
    noisy.values[i] += 0.01 * std::sin(3.0 * static_cast<double>(i));
  TrendFit f0 = ols_loggrowth(noisy);
  TimeSeries shifted = noisy;
  for (auto& v : shifted.values) v += 4.2;
  TrendFit f1 = ols_loggrowth(shifted);
  REQUIRE(f1.rho_lt == Approx(f0.rho_lt).margin(1e-12));
  REQUIRE(f1.intercept == Approx(f0.intercept + 4.2).margin(1e-9));
}

TEST_CASE("ols_loggrowth input checks") {
  TimeSeries two;
  two.kind = SeriesKind::log_level;
  two.times = {0.0, 1.0};
  two.values = {0.0, 1.0};
  try {
    ols_loggrowth(two);
    FAIL("expected TooFewSamples");
  } catch (const Error& e) {
    REQUIRE(e.code() == Errc::too_few_samples);
  }
  TimeSeries level = exact_line(0.02, 5.0);
  level.kind = SeriesKind::level;
  REQUIRE_THROWS_AS(ols_loggrowth(level), Error);
}
