#pragma once

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>

#include "growthscope/detail/format.hpp"
#include "growthscope/errors.hpp"
#include "growthscope/time_series.hpp"

namespace growthscope {

enum class DateConvention { year_decimal, year_quarter, year_only };

inline const char* date_convention_name(DateConvention c) {
  switch (c) {
    case DateConvention::year_decimal: return "year_decimal";
    case DateConvention::year_quarter: return "year_quarter";
    case DateConvention::year_only: return "year_only";
  }
  return "?";
}

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

// "1947Q1" -> 1947.0, quarters stamped at quarter start.
inline bool parse_quarter(std::string_view s, double& out) {
  auto qpos = s.find_first_of("Qq");
  if (qpos == std::string_view::npos || qpos == 0 || qpos + 2 != s.size()) return false;
  double year;
  if (!parse_double(s.substr(0, qpos), year)) return false;
  char qc = s[qpos + 1];
  if (qc < '1' || qc > '4') return false;
  out = year + 0.25 * (qc - '1');
  return true;
}

inline bool parse_date(std::string_view s, DateConvention conv, double& out) {
  switch (conv) {
    case DateConvention::year_quarter:
      return parse_quarter(s, out);
    case DateConvention::year_only: {
      if (!parse_double(s, out)) return false;
      return out == static_cast<long long>(out);
    }
    case DateConvention::year_decimal:
      return parse_double(s, out);
  }
  return false;
}

}  // namespace detail

// Two-column CSV (date,value), UTF-8, '.' decimal point, optional header
// detected by a non-numeric first row.
inline TimeSeries load_series(const std::filesystem::path& path, DateConvention conv) {
  std::ifstream in(path, std::ios::binary);
  if (!in) raise(Errc::malformed_row, "cannot open " + path.string());
  TimeSeries out;
  out.kind = SeriesKind::level;
  out.label = path.stem().string();
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string_view sv = detail::trim(line);
    if (sv.empty()) continue;
    auto comma = sv.find(',');
    if (comma == std::string_view::npos)
      raise(Errc::malformed_row, "line " + std::to_string(lineno) + ": expected two columns");
    std::string_view date_sv = detail::trim(sv.substr(0, comma));
    std::string_view value_sv = detail::trim(sv.substr(comma + 1));
    double t, v;
    if (!detail::parse_date(date_sv, conv, t)) {
      if (lineno == 1) continue;  // header row
      raise(Errc::malformed_row, "line " + std::to_string(lineno) + ": bad date '" +
                                     std::string(date_sv) + "'");
    }
    if (!detail::parse_double(value_sv, v))
      raise(Errc::malformed_row, "line " + std::to_string(lineno) + ": bad value '" +
                                     std::string(value_sv) + "'");
    if (!(v > 0.0))
      raise(Errc::non_positive_value, "line " + std::to_string(lineno));
    out.times.push_back(t);
    out.values.push_back(v);
  }
  validate_series(out);
  return out;
}

// Canonical CSV: decimal-year dates, shortest round-trip formatting.
// load_series(write_series(s), year_decimal) reproduces s exactly.
inline void write_series(std::ostream& os, const TimeSeries& s) {
  os << "date,value\n";
  for (std::size_t i = 0; i < s.size(); ++i)
    os << detail::format_double(s.times[i]) << ',' << detail::format_double(s.values[i]) << '\n';
  if (!os) raise(Errc::write_failure, "write_series");
}

inline void write_series(const std::filesystem::path& path, const TimeSeries& s) {
  std::ofstream os(path, std::ios::binary);
  if (!os) raise(Errc::write_failure, path.string());
  write_series(os, s);
}

// Bundled-fixture lookup; GROWTHSCOPE_FIXTURES overrides the data directory.
inline std::filesystem::path fixture_path(const std::string& name) {
  if (const char* env = std::getenv("GROWTHSCOPE_FIXTURES")) {
    return std::filesystem::path(env) / name;
  }
#ifdef GROWTHSCOPE_DATA_DIR
  return std::filesystem::path(GROWTHSCOPE_DATA_DIR) / name;
#else
  return std::filesystem::path("data") / name;
#endif
}

}  // namespace growthscope
