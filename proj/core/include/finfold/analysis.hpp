#pragma once

#include <span>
#include <vector>

#include "finfold/dynamics.hpp"

namespace finfold {

struct TimeWindow {
  double begin;
  double end;
};

// x = a t^2 / 2 fitted through the origin after rebasing to the window
// start. r_squared uses SS_tot about the mean displacement.
struct AccelFit {
  double acceleration;
  double r_squared;
  TimeWindow window;
};

struct PhaseDetectionOptions {
  double window = 0.5;     // s, speed-change look-back
  double threshold = 0.02; // fraction of current speed
  double hold = 1.0;       // s the condition must persist
};

struct Point2 {
  double x;
  double y;
};

struct Circle {
  double center_x;
  double center_y;
  double radius;
  double residual_rms;  // rms of |p - c| - R
};

struct TurnFit {
  double radius;
  double angular_speed;  // signed, rad/s
  double center_x;
  double center_y;
  double residual_rms;
  double mean_path_speed;
};

inline constexpr std::size_t kMinFitSamples = 10;
inline constexpr std::size_t kMinTurnSamples = 20;
// Heading change a turn fit needs inside its window.
inline constexpr double kMinTurnAngle = 0.5 * kPi;

AccelFit fit_constant_acceleration(std::span<const double> t, std::span<const double> x);
AccelFit fit_constant_acceleration(const Trajectory& traj, TimeWindow window);

// End of the acceleration phase: the earliest sample time from which the
// look-back speed change stays below threshold * U for `hold` seconds.
// Throws kNoSteadyPhase if that never happens.
double detect_phases(const Trajectory& traj, const PhaseDetectionOptions& options = {});

// Ordinary least-squares slope of x against t.
double fit_steady_speed(std::span<const double> t, std::span<const double> x);
double fit_steady_speed(const Trajectory& traj, TimeWindow window);

// Algebraic (Kasa) circle fit. Throws kCircleDegenerate for collinear input.
Circle fit_circle(std::span<const Point2> points);

// Circle fit on the planar path plus the mean unwrapped heading rate.
TurnFit fit_turning(const Trajectory& traj);
TurnFit fit_turning(const Trajectory& traj, TimeWindow window);

// Mean peak-to-peak excursion of a lateral oscillation. The series is
// linearly detrended, cut into cycles at upward zero crossings, and each
// cycle's fundamental is fitted by least squares. Needs >= 3 cycles.
double head_heave_amplitude(std::span<const double> lateral);

// Heading unwrapped so consecutive differences lie in (-pi, pi].
std::vector<double> unwrap_angles(std::span<const double> angles);

}  // namespace finfold
