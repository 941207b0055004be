#pragma once

// Elevation ingest: a raw latitude/longitude grid is bilinearly resampled
// onto the 2B x 2B sphere grid (theta_k, phi_j), latitude = 90 - theta in
// degrees and longitude = phi in degrees. Longitude wraps with period 360;
// latitudes beyond the raw grid's extent take the nearest row.
//
// Raw inputs:
//   CSV    lines "lat_deg, lon_deg, value", latitude-major. Latitudes are
//          monotone, longitudes strictly increasing and identical in every
//          latitude row. An optional non-numeric first line is skipped.
//   dense  header "rows cols", then rows*cols values row-major. Row i sits at
//          latitude 90 - 180 i / (rows - 1), column j at longitude 360 j / cols.

#include <algorithm>
#include <cmath>
#include <istream>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "so3ft/coefficients.hpp"
#include "so3ft/grid.hpp"
#include "so3ft/io.hpp"

namespace so3ft {

using ElevationGrid = S2Samples;

struct RawGrid {
  std::vector<double> lat_deg;  // monotone
  std::vector<double> lon_deg;  // strictly increasing, span < 360
  Eigen::MatrixXd values;       // lat x lon

  /// Bilinear value at (lat, lon) in degrees.
  double sample(double lat, double lon) const {
    // latitude bracket on an ascending copy of the axis
    const bool descending = lat_deg.size() > 1 && lat_deg.front() > lat_deg.back();
    const int rows = static_cast<int>(lat_deg.size());
    auto lat_at = [&](int i) { return descending ? lat_deg[static_cast<std::size_t>(rows - 1 - i)] : lat_deg[static_cast<std::size_t>(i)]; };
    auto row_of = [&](int i) { return descending ? rows - 1 - i : i; };
    int i0 = 0, i1 = 0;
    double t = 0.0;
    if (rows > 1 && lat > lat_at(0)) {
      if (lat >= lat_at(rows - 1)) {
        i0 = i1 = rows - 1;
      } else {
        i1 = 1;
        while (lat_at(i1) < lat) ++i1;
        i0 = i1 - 1;
        t = (lat - lat_at(i0)) / (lat_at(i1) - lat_at(i0));
      }
    }

    const int cols = static_cast<int>(lon_deg.size());
    int j0 = 0, j1 = 0;
    double s = 0.0;
    if (cols > 1) {
      double x = lon_deg.front() + std::fmod(lon - lon_deg.front(), 360.0);
      if (x < lon_deg.front()) x += 360.0;
      const auto it = std::upper_bound(lon_deg.begin(), lon_deg.end(), x);
      j0 = static_cast<int>(it - lon_deg.begin()) - 1;
      j1 = (j0 + 1) % cols;
      const double right = (j1 == 0) ? lon_deg.front() + 360.0 : lon_deg[static_cast<std::size_t>(j1)];
      s = (x - lon_deg[static_cast<std::size_t>(j0)]) / (right - lon_deg[static_cast<std::size_t>(j0)]);
    }

    auto v = [&](int i, int j) { return values(row_of(i), j); };
    return (1 - t) * ((1 - s) * v(i0, j0) + s * v(i0, j1)) + t * ((1 - s) * v(i1, j0) + s * v(i1, j1));
  }
};

namespace detail {

inline void check_raw(const RawGrid& g, int line) {
  if (g.lat_deg.empty() || g.lon_deg.empty()) throw FormatError(line, "empty raw grid");
  for (std::size_t i = 1; i < g.lon_deg.size(); ++i)
    if (!(g.lon_deg[i] > g.lon_deg[i - 1])) throw FormatError(line, "longitudes not strictly increasing");
  if (g.lon_deg.back() - g.lon_deg.front() >= 360.0) throw FormatError(line, "longitudes span 360 degrees or more");
  if (g.lat_deg.size() > 1) {
    const bool down = g.lat_deg[1] < g.lat_deg[0];
    for (std::size_t i = 1; i < g.lat_deg.size(); ++i)
      if (down ? !(g.lat_deg[i] < g.lat_deg[i - 1]) : !(g.lat_deg[i] > g.lat_deg[i - 1]))
        throw FormatError(line, "latitudes not monotone");
  }
  for (double lat : g.lat_deg)
    if (lat < -90.0 || lat > 90.0) throw FormatError(line, "latitude outside [-90, 90]");
}

}  // namespace detail

inline RawGrid read_raw_csv(std::istream& in) {
  std::vector<double> lats, lons, vals;
  std::string line;
  int line_no = 0;
  bool first = true;
  while (std::getline(in, line)) {
    ++line_no;
    const auto start = line.find_first_not_of(" \t\r");
    if (start == std::string::npos || line[start] == '#') continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream ss(line);
    std::vector<std::string> t;
    for (std::string s; ss >> s;) t.push_back(s);
    double lat = 0, lon = 0, v = 0;
    try {
      if (t.size() != 3) throw FormatError(line_no, "expected 'lat, lon, value'");
      lat = detail::parse_number<double>(t[0], line_no);
      lon = detail::parse_number<double>(t[1], line_no);
      v = detail::parse_number<double>(t[2], line_no);
    } catch (const FormatError&) {
      if (!first) throw;
      first = false;  // header line
      continue;
    }
    first = false;
    lats.push_back(lat);
    lons.push_back(lon);
    vals.push_back(v);
  }
  if (vals.empty()) throw FormatError(line_no, "no data rows");

  RawGrid g;
  std::size_t cols = 0;
  while (cols < lats.size() && lats[cols] == lats[0]) ++cols;
  if (vals.size() % cols != 0) throw FormatError(line_no, "row count not a multiple of the longitude count");
  const std::size_t rows = vals.size() / cols;
  g.lon_deg.assign(lons.begin(), lons.begin() + static_cast<long>(cols));
  g.values.resize(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (std::size_t i = 0; i < rows; ++i) {
    g.lat_deg.push_back(lats[i * cols]);
    for (std::size_t j = 0; j < cols; ++j) {
      const std::size_t p = i * cols + j;
      if (lats[p] != lats[i * cols] || lons[p] != g.lon_deg[j])
        throw FormatError(line_no, "grid is not rectangular at data row " + std::to_string(p + 1));
      g.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = vals[p];
    }
  }
  detail::check_raw(g, line_no);
  return g;
}

inline RawGrid read_raw_dense(std::istream& in) {
  detail::LineReader r(in);
  std::vector<std::string> t;
  if (!r.next(t) || t.size() != 2) throw FormatError(r.line(), "expected 'rows cols' header");
  const int rows = r.number<int>(t[0]), cols = r.number<int>(t[1]);
  if (rows < 2 || cols < 1) r.fail("dense grid needs rows >= 2 and cols >= 1");
  RawGrid g;
  g.values.resize(rows, cols);
  long count = 0;
  while (r.next(t)) {
    for (const auto& s : t) {
      if (count >= static_cast<long>(rows) * cols) r.fail("more than rows*cols values");
      g.values(count / cols, count % cols) = r.number<double>(s);
      ++count;
    }
  }
  if (count != static_cast<long>(rows) * cols)
    throw FormatError(r.line(), "expected " + std::to_string(rows * cols) + " values, got " + std::to_string(count));
  for (int i = 0; i < rows; ++i) g.lat_deg.push_back(90.0 - 180.0 * i / (rows - 1));
  for (int j = 0; j < cols; ++j) g.lon_deg.push_back(360.0 * j / cols);
  return g;
}

/// CSV when the first data line contains a comma, dense otherwise.
inline RawGrid read_raw_grid(std::istream& in) {
  std::stringstream buffer;
  buffer << in.rdbuf();
  const std::string text = buffer.str();
  std::istringstream probe(text);
  std::string line;
  bool csv = false;
  while (std::getline(probe, line)) {
    const auto start = line.find_first_not_of(" \t\r");
    if (start == std::string::npos || line[start] == '#') continue;
    csv = line.find(',') != std::string::npos;
    break;
  }
  std::istringstream body(text);
  return csv ? read_raw_csv(body) : read_raw_dense(body);
}

inline ElevationGrid resample(const RawGrid& raw, int bandwidth) {
  const SampleGrid g = make_grid(bandwidth);
  ElevationGrid out(bandwidth);
  for (int k = 0; k < out.side(); ++k) {
    const double lat = 90.0 - g.beta[static_cast<std::size_t>(k)] * 180.0 / kPi;
    for (int j = 0; j < out.side(); ++j) out(k, j) = raw.sample(lat, g.alpha[static_cast<std::size_t>(j)] * 180.0 / kPi);
  }
  return out;
}

/// Shift to zero sphere mean, then scale to unit max-abs. A grid flat to
/// within 1e-12 of its magnitude becomes zero.
inline void normalize(ElevationGrid& grid) {
  const SampleGrid g = make_grid(grid.bandwidth());
  double mean = 0.0, scale = 0.0;
  for (int k = 0; k < grid.side(); ++k)
    for (int j = 0; j < grid.side(); ++j) {
      mean += 2.0 * grid.bandwidth() * g.weight[static_cast<std::size_t>(k)] * grid(k, j);
      scale = std::max(scale, std::abs(grid(k, j)));
    }
  double peak = 0.0;
  for (double& v : grid.values()) {
    v -= mean;
    peak = std::max(peak, std::abs(v));
  }
  if (peak <= 1e-12 * scale) peak = 0.0;
  for (double& v : grid.values()) v = peak == 0.0 ? 0.0 : v / peak;
}

inline ElevationGrid ingest_elevation(std::istream& in, int bandwidth, bool normalise = true) {
  ElevationGrid grid = resample(read_raw_grid(in), bandwidth);
  for (double v : grid.values())
    if (!std::isfinite(v)) throw std::runtime_error("ingest_elevation: non-finite value after resampling");
  if (normalise) normalize(grid);
  return grid;
}

}  // namespace so3ft
