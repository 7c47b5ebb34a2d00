#pragma once

#include <stdexcept>
#include <string>

namespace growthscope {

enum class Errc {
  malformed_row,
  non_uniform_spacing,
  non_positive_value,
  already_log,
  kind_mismatch,
  non_positive_scale,
  grid_incompatible,
  scale_not_in_grid,
  empty_samples,
  non_positive_bandwidth,
  degenerate_samples,
  too_few_samples,
  non_increasing_times,
  growth_below_minus_one,
  span_mismatch,
  write_failure,
  invalid_config,
  numeric_failure,
};

inline const char* errc_name(Errc c) {
  switch (c) {
    case Errc::malformed_row: return "MalformedRow";
    case Errc::non_uniform_spacing: return "NonUniformSpacing";
    case Errc::non_positive_value: return "NonPositiveValue";
    case Errc::already_log: return "AlreadyLog";
    case Errc::kind_mismatch: return "KindMismatch";
    case Errc::non_positive_scale: return "NonPositiveScale";
    case Errc::grid_incompatible: return "GridIncompatible";
    case Errc::scale_not_in_grid: return "ScaleNotInGrid";
    case Errc::empty_samples: return "EmptySamples";
    case Errc::non_positive_bandwidth: return "NonPositiveBandwidth";
    case Errc::degenerate_samples: return "DegenerateSamples";
    case Errc::too_few_samples: return "TooFewSamples";
    case Errc::non_increasing_times: return "NonIncreasingTimes";
    case Errc::growth_below_minus_one: return "GrowthBelowMinusOne";
    case Errc::span_mismatch: return "SpanMismatch";
    case Errc::write_failure: return "WriteFailure";
    case Errc::invalid_config: return "InvalidConfig";
    case Errc::numeric_failure: return "NumericFailure";
  }
  return "UnknownError";
}

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void raise(Errc code, const std::string& what) {
  throw Error(code, what);
}

}  // namespace growthscope
