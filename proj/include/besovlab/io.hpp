#pragma once

// Plain-text path I/O: shortest round-trip decimal CSV and ingestion of
// arbitrary (time, value) series onto a dyadic grid.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "besovlab/error.hpp"
#include "besovlab/path.hpp"

namespace besovlab {

/// Shortest decimal that parses back to the same double.
inline std::string format_double(double x) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

inline std::optional<double> parse_double(std::string_view text) {
  while (!text.empty() && (text.front() == ' ' || text.front() == '\t')) text.remove_prefix(1);
  while (!text.empty() && (text.back() == ' ' || text.back() == '\t' || text.back() == '\r')) text.remove_suffix(1);
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  double value = 0.0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
  if (res.ec != std::errc{} || res.ptr != text.data() + text.size() || text.empty()) return std::nullopt;
  return value;
}

inline void write_path_csv(std::ostream& out, const SampledPath& path) {
  out << "t,value\n";
  for (std::size_t k = 0; k < path.size(); ++k)
    out << format_double(path.grid().point(k)) << ',' << format_double(path[k]) << '\n';
}

struct IngestedSeries {
  std::vector<double> times;
  std::vector<double> values;
};

/// Reads two-column "t,value" CSV. A non-numeric first line is taken as a header.
inline IngestedSeries read_series_csv(std::istream& in) {
  IngestedSeries series;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto comma = line.find(',');
    const auto t = comma == std::string::npos ? std::nullopt : parse_double(std::string_view(line).substr(0, comma));
    const auto v = comma == std::string::npos ? std::nullopt : parse_double(std::string_view(line).substr(comma + 1));
    if (!t || !v) {
      if (series.times.empty() && line_no == 1) continue;
      throw DataError("line " + std::to_string(line_no) + ": expected two numeric columns 't,value'");
    }
    if (!std::isfinite(*t) || !std::isfinite(*v)) throw DataError("line " + std::to_string(line_no) + ": non-finite value");
    if (!series.times.empty() && !(*t > series.times.back()))
      throw DataError("line " + std::to_string(line_no) + ": times must be strictly increasing");
    series.times.push_back(*t);
    series.values.push_back(*v);
  }
  if (series.times.size() < 2) throw DataError("series needs at least two points");
  return series;
}

struct IngestResult {
  SampledPath path;
  std::size_t raw_points = 0;
  bool resampled = false;
};

/// Smallest J with 2^J + 1 >= points, clamped to [1, kMaxLevel].
inline int resolution_for(std::size_t points) {
  int J = 1;
  while (J < kMaxLevel && (std::size_t{1} << J) + 1 < points) ++J;
  return J;
}

/// Places a series on the dyadic grid over [first time, last time]. A series that
/// already sits exactly on that grid is taken verbatim; otherwise it is linearly
/// resampled at resolution J (default: resolution_for(points)).
inline IngestResult ingest(const IngestedSeries& series, std::optional<int> J = std::nullopt) {
  const std::size_t n = series.times.size();
  if (n < 2 || series.values.size() != n) throw DataError("series needs at least two (t, value) pairs");
  const Grid grid(series.times.front(), series.times.back(), J.value_or(resolution_for(n)));
  if (n == grid.points()) {
    bool on_grid = true;
    for (std::size_t k = 0; k < n && on_grid; ++k) on_grid = series.times[k] == grid.point(k);
    if (on_grid) return {SampledPath(grid, series.values), n, false};
  }
  std::vector<double> v(grid.points());
  std::size_t seg = 0;
  for (std::size_t k = 0; k < v.size(); ++k) {
    const double x = grid.point(k);
    while (seg + 2 < n && series.times[seg + 1] < x) ++seg;
    const double t0 = series.times[seg], t1 = series.times[seg + 1];
    const double w = std::clamp((x - t0) / (t1 - t0), 0.0, 1.0);
    v[k] = series.values[seg] + w * (series.values[seg + 1] - series.values[seg]);
  }
  return {SampledPath(grid, std::move(v)), n, true};
}

}  // namespace besovlab
