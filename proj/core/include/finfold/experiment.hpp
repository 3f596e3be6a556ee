#pragma once

#include "finfold/analysis.hpp"
#include "finfold/dynamics.hpp"
#include "finfold/metrics.hpp"

namespace finfold {

// Protocol shared by the sweep, calibration and validation: straight runs
// from rest, acceleration fitted up to the detected end of the acceleration
// phase, speed and power averaged over the last `steady_window` seconds;
// turns fitted over their second half.
struct ExperimentSettings {
  double dt = kDefaultTimeStep;
  double straight_duration = 30.0;
  double steady_window = 5.0;
  double turn_duration = 40.0;
  double turn_max_duration = 240.0;
  PhaseDetectionOptions phases;

  void validate() const;
  bool operator==(const ExperimentSettings& o) const {
    return dt == o.dt && straight_duration == o.straight_duration &&
           steady_window == o.steady_window && turn_duration == o.turn_duration &&
           turn_max_duration == o.turn_max_duration && phases.window == o.phases.window &&
           phases.threshold == o.phases.threshold && phases.hold == o.phases.hold;
  }
};

struct StraightRun {
  Trajectory trajectory;
  double accel_end = 0.0;
  AccelFit accel{};
  double steady_speed = 0.0;
  double steady_power_caudal = 0.0;
  double steady_power_dorsal = 0.0;
  double final_speed = 0.0;
  // Whole-record averages, used for the fold-after-acceleration COT.
  double run_mean_speed = 0.0;
  double run_mean_power = 0.0;
};

StraightRun run_straight(const SwimmerModel& model, const Gait& gait,
                         const FinSchedule& schedule, const ExperimentSettings& settings);

struct TurnRun {
  Trajectory trajectory;
  TimeWindow window{};
  TurnFit fit{};
};

// Extends the run once (up to turn_max_duration) when the fit window turns
// through less than kMinTurnAngle.
TurnRun run_turn(const SwimmerModel& model, const Gait& gait, FinState fin,
                 const ExperimentSettings& settings);

// Steady-swimming metrics of a constant-fin straight run.
SwimMetrics straight_metrics(const SwimmerModel& model, const Gait& gait, FinState fin,
                             const StraightRun& run);

// COT of the whole record (mean total power over mean speed).
double run_cost_of_transport(const SwimmerModel& model, const StraightRun& run);

}  // namespace finfold
