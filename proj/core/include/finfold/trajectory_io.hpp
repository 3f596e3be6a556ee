#pragma once

#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "finfold/dynamics.hpp"

namespace finfold {

struct MarkerSeries {
  int id = 0;
  std::vector<double> t;
  std::vector<double> x;
  std::vector<double> y;

  std::size_t size() const { return t.size(); }
};

struct MarkerData {
  double dt = 0.0;         // median sample interval
  bool resampled = false;  // true when timestamps were non-uniform
  std::map<int, MarkerSeries> markers;
};

// Parses `t,marker_id,x,y` rows (columns in any order, extra columns
// ignored). Rows must be sorted by t and each marker strictly increasing in
// t (kNonMonotonicTime). A gap above 3x the median interval is kTimeGap.
// Non-uniform series are resampled onto t0 + k*dt by linear interpolation.
MarkerData parse_trajectory_csv(std::string_view text);
MarkerData ingest_trajectory_csv(const std::filesystem::path& path);

// Linear interpolation of (t, v) onto `grid`; grid points must lie inside
// [t.front(), t.back()].
std::vector<double> interpolate_linear(std::span<const double> t, std::span<const double> v,
                                       std::span<const double> grid);

// Marker index nearest `fraction` of the body length from the nose, for n
// markers evenly spaced nose to tail.
int reference_marker(int marker_count, double fraction);

// Planar trajectory of one tracked marker. Heading and speed come from
// central differences of position; fin state and power are unknown and left
// at folded / zero.
Trajectory series_to_trajectory(const MarkerSeries& series, double dt);

// Body markers for each sample: n points evenly spaced along the midline,
// marker 0 at the nose, placed in the world frame from the trajectory pose
// (position of the nose, heading) plus the gait's lateral displacement.
std::string format_marker_csv(const SwimmerModel& model, const Gait& gait,
                              const Trajectory& traj, int marker_count = kDefaultMarkerCount);
void write_marker_csv(const std::filesystem::path& path, const SwimmerModel& model,
                      const Gait& gait, const Trajectory& traj,
                      int marker_count = kDefaultMarkerCount);

}  // namespace finfold
