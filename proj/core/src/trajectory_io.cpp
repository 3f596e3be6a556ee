#include "finfold/trajectory_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "finfold/analysis.hpp"
#include "finfold/error.hpp"

namespace finfold {
namespace {

// Relative spread of intervals tolerated as "uniform" (float formatting noise).
constexpr double kUniformTolerance = 1e-9;
constexpr double kMaxGapFactor = 3.0;

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    out.push_back(trim(line.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

[[noreturn]] void parse_error(std::size_t line, const std::string& message) {
  throw Error(ErrorKind::kParse, "line " + std::to_string(line) + ": " + message);
}

double to_double(std::string_view s, std::size_t line, const char* column) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size() || !std::isfinite(v)) {
    parse_error(line, std::string("invalid ") + column + " '" + std::string(s) + "'");
  }
  return v;
}

int to_int(std::string_view s, std::size_t line) {
  int v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) {
    parse_error(line, "invalid marker_id '" + std::string(s) + "'");
  }
  return v;
}

double median(std::vector<double> v) {
  const auto mid = v.begin() + static_cast<std::ptrdiff_t>(v.size() / 2);
  std::nth_element(v.begin(), mid, v.end());
  double m = *mid;
  if (v.size() % 2 == 0) m = 0.5 * (m + *std::max_element(v.begin(), mid));
  return m;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

}  // namespace

std::vector<double> interpolate_linear(std::span<const double> t, std::span<const double> v,
                                       std::span<const double> grid) {
  if (t.size() != v.size() || t.size() < 2) {
    throw Error(ErrorKind::kArgument, "interpolate_linear needs >= 2 matching samples");
  }
  std::vector<double> out;
  out.reserve(grid.size());
  std::size_t k = 0;
  for (double g : grid) {
    if (g < t.front() || g > t.back()) {
      throw Error(ErrorKind::kDomain, "interpolation point outside the sampled range");
    }
    while (k + 2 < t.size() && t[k + 1] < g) ++k;
    const double w = (g - t[k]) / (t[k + 1] - t[k]);
    out.push_back(v[k] + w * (v[k + 1] - v[k]));
  }
  return out;
}

MarkerData parse_trajectory_csv(std::string_view text) {
  std::size_t line_no = 0;
  std::size_t pos = 0;
  auto next_line = [&](std::string_view& line) {
    while (pos < text.size()) {
      const auto nl = text.find('\n', pos);
      line = text.substr(pos, nl - pos);
      pos = nl == std::string_view::npos ? text.size() : nl + 1;
      ++line_no;
      if (!trim(line).empty()) return true;
    }
    return false;
  };

  std::string_view line;
  if (!next_line(line)) throw Error(ErrorKind::kParse, "empty trajectory file");
  const auto header = split(line);
  int col_t = -1, col_id = -1, col_x = -1, col_y = -1;
  for (std::size_t i = 0; i < header.size(); ++i) {
    const int c = static_cast<int>(i);
    if (header[i] == "t") col_t = c;
    else if (header[i] == "marker_id") col_id = c;
    else if (header[i] == "x") col_x = c;
    else if (header[i] == "y") col_y = c;
  }
  std::string missing;
  for (auto [col, name] : {std::pair{col_t, "t"}, {col_id, "marker_id"}, {col_x, "x"},
                           {col_y, "y"}}) {
    if (col < 0) missing += (missing.empty() ? "" : ", ") + std::string(name);
  }
  if (!missing.empty()) {
    throw Error(ErrorKind::kParse, "line 1: missing column(s) " + missing);
  }
  const std::size_t width = header.size();

  MarkerData data;
  double last_t = -INFINITY;
  while (next_line(line)) {
    const auto cells = split(line);
    if (cells.size() != width) {
      parse_error(line_no, "expected " + std::to_string(width) + " fields, got " +
                               std::to_string(cells.size()));
    }
    const double t = to_double(cells[col_t], line_no, "t");
    const int id = to_int(cells[col_id], line_no);
    const double x = to_double(cells[col_x], line_no, "x");
    const double y = to_double(cells[col_y], line_no, "y");
    if (t < last_t) {
      throw Error(ErrorKind::kNonMonotonicTime,
                  "line " + std::to_string(line_no) + ": t decreases");
    }
    last_t = t;
    auto& s = data.markers[id];
    s.id = id;
    if (!s.t.empty() && t <= s.t.back()) {
      throw Error(ErrorKind::kNonMonotonicTime, "line " + std::to_string(line_no) +
                                                    ": repeated t for marker " +
                                                    std::to_string(id));
    }
    s.t.push_back(t);
    s.x.push_back(x);
    s.y.push_back(y);
  }
  if (data.markers.empty()) throw Error(ErrorKind::kParse, "no data rows");

  std::vector<double> intervals;
  for (const auto& [id, s] : data.markers) {
    if (s.size() < 2) {
      throw Error(ErrorKind::kDegenerateData,
                  "marker " + std::to_string(id) + " has fewer than 2 samples");
    }
    for (std::size_t i = 1; i < s.size(); ++i) intervals.push_back(s.t[i] - s.t[i - 1]);
  }
  const double dt = median(intervals);
  data.dt = dt;

  bool uniform = true;
  for (const auto& [id, s] : data.markers) {
    for (std::size_t i = 1; i < s.size(); ++i) {
      const double d = s.t[i] - s.t[i - 1];
      if (d > kMaxGapFactor * dt) {
        throw Error(ErrorKind::kTimeGap, "marker " + std::to_string(id) + ": gap of " +
                                             fmt(d) + " s at t = " + fmt(s.t[i - 1]) +
                                             " exceeds 3x the median interval " + fmt(dt));
      }
      if (std::abs(d - dt) > kUniformTolerance * dt) uniform = false;
    }
  }
  if (uniform) return data;

  data.resampled = true;
  for (auto& [id, s] : data.markers) {
    const auto n = static_cast<std::size_t>(std::floor((s.t.back() - s.t.front()) / dt + 1e-9));
    std::vector<double> grid(n + 1);
    for (std::size_t k = 0; k <= n; ++k) {
      grid[k] = std::min(s.t.front() + static_cast<double>(k) * dt, s.t.back());
    }
    s.x = interpolate_linear(s.t, s.x, grid);
    s.y = interpolate_linear(s.t, s.y, grid);
    s.t = std::move(grid);
  }
  return data;
}

MarkerData ingest_trajectory_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::kIo, "cannot open '" + path.string() + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return parse_trajectory_csv(os.str());
}

int reference_marker(int marker_count, double fraction) {
  if (marker_count < 2) throw Error(ErrorKind::kArgument, "need at least 2 markers");
  if (!(fraction >= 0.0 && fraction <= 1.0)) {
    throw Error(ErrorKind::kDomain, "marker fraction must lie in [0, 1]");
  }
  return static_cast<int>(std::lround(fraction * (marker_count - 1)));
}

Trajectory series_to_trajectory(const MarkerSeries& series, double dt) {
  const std::size_t n = series.size();
  if (n < 2) throw Error(ErrorKind::kDegenerateData, "series has fewer than 2 samples");
  if (!(dt > 0.0)) throw Error(ErrorKind::kArgument, "dt must be positive");
  Trajectory traj;
  traj.dt = dt;
  traj.samples.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t a = i == 0 ? 0 : i - 1;
    const std::size_t b = i + 1 == n ? n - 1 : i + 1;
    const double span = series.t[b] - series.t[a];
    const double vx = (series.x[b] - series.x[a]) / span;
    const double vy = (series.y[b] - series.y[a]) / span;
    traj.samples.push_back({series.t[i], series.x[i], series.y[i], std::atan2(vy, vx),
                            std::hypot(vx, vy), FinState::kFolded, 0.0, 0.0});
  }
  // Keep heading continuous so turn fits see the accumulated rotation.
  const auto unwrapped = unwrap_angles(traj.headings());
  for (std::size_t i = 0; i < n; ++i) traj.samples[i].heading = unwrapped[i];
  return traj;
}

std::string format_marker_csv(const SwimmerModel& model, const Gait& gait,
                              const Trajectory& traj, int marker_count) {
  if (marker_count < 2) throw Error(ErrorKind::kArgument, "need at least 2 markers");
  const MidlineParams mp = gait_midline(model, gait);
  std::string out = "t,marker_id,x,y\n";
  for (const auto& s : traj.samples) {
    const auto points = sample_midline(mp, s.t, marker_count);
    const double c = std::cos(s.heading);
    const double sn = std::sin(s.heading);
    for (int i = 0; i < marker_count; ++i) {
      // Body frame: x aft of the nose, h to port.
      const double bx = -points[static_cast<std::size_t>(i)].x;
      const double by = points[static_cast<std::size_t>(i)].h;
      out += fmt(s.t) + "," + std::to_string(i) + "," + fmt(s.x + c * bx - sn * by) + "," +
             fmt(s.y + sn * bx + c * by) + "\n";
    }
  }
  return out;
}

void write_marker_csv(const std::filesystem::path& path, const SwimmerModel& model,
                      const Gait& gait, const Trajectory& traj, int marker_count) {
  const std::string text = format_marker_csv(model, gait, traj, marker_count);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::kIo, "cannot write '" + path.string() + "'");
  out << text;
  if (!out) throw Error(ErrorKind::kIo, "write to '" + path.string() + "' failed");
}

}  // namespace finfold
