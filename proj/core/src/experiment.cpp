#include "finfold/experiment.hpp"

#include <algorithm>
#include <cmath>

#include "finfold/error.hpp"

namespace finfold {

void ExperimentSettings::validate() const {
  if (!(dt > 0.0 && dt <= kMaxTimeStep)) {
    throw Error(ErrorKind::kValidation, "dt must lie in (0, 0.01]");
  }
  if (!(straight_duration >= 3.0)) {
    throw Error(ErrorKind::kValidation, "straight_duration must be at least 3 s");
  }
  if (!(steady_window > 0.0 && steady_window < straight_duration)) {
    throw Error(ErrorKind::kValidation, "steady_window must lie in (0, straight_duration)");
  }
  if (!(turn_duration > 0.0)) throw Error(ErrorKind::kValidation, "turn_duration must be positive");
  if (!(turn_max_duration >= turn_duration)) {
    throw Error(ErrorKind::kValidation, "turn_max_duration must be >= turn_duration");
  }
}

StraightRun run_straight(const SwimmerModel& model, const Gait& gait,
                         const FinSchedule& schedule, const ExperimentSettings& settings) {
  StraightRun run;
  run.trajectory = simulate_straight(model, gait, schedule, settings.straight_duration,
                                     settings.dt);
  const Trajectory& traj = run.trajectory;
  const double end = traj.samples.back().t;

  run.accel_end = detect_phases(traj, settings.phases);
  run.accel = fit_constant_acceleration(traj, {0.0, run.accel_end});

  const TimeWindow steady{end - settings.steady_window, end};
  if (run.accel_end > steady.begin) {
    throw Error(ErrorKind::kNoSteadyPhase,
                "acceleration phase overlaps the steady averaging window");
  }
  run.steady_speed = fit_steady_speed(traj, steady);

  double caudal = 0.0;
  double dorsal = 0.0;
  double total = 0.0;
  std::size_t in_window = 0;
  for (const auto& s : traj.samples) {
    total += s.power();
    if (s.t >= steady.begin - 1e-9) {
      caudal += s.power_caudal;
      dorsal += s.power_dorsal;
      ++in_window;
    }
  }
  run.steady_power_caudal = caudal / static_cast<double>(in_window);
  run.steady_power_dorsal = dorsal / static_cast<double>(in_window);
  run.final_speed = traj.samples.back().speed;
  run.run_mean_speed = traj.samples.back().x / traj.duration();
  run.run_mean_power = total / static_cast<double>(traj.size());
  return run;
}

TurnRun run_turn(const SwimmerModel& model, const Gait& gait, FinState fin,
                 const ExperimentSettings& settings) {
  double duration = settings.turn_duration;
  for (int attempt = 0;; ++attempt) {
    TurnRun run;
    run.trajectory = simulate_turn(model, gait, fin, duration, settings.dt);
    const auto& s = run.trajectory.samples;
    run.window = {0.5 * s.back().t, s.back().t};

    // Heading change inside the window; the simulator's heading is continuous.
    const std::size_t mid = s.size() / 2;
    const double turned = std::abs(s.back().heading - s[mid].heading);
    const double span = s.back().t - s[mid].t;
    // A steady turn traces an exact circle, so any arc the fit accepts will
    // do; lengthening only when needed keeps results smooth in the model
    // parameters.
    if (turned >= kMinTurnAngle || duration >= settings.turn_max_duration || attempt > 0) {
      run.fit = fit_turning(run.trajectory, run.window);
      return run;
    }
    if (!(turned > 0.0)) {
      throw Error(ErrorKind::kDegenerateData, "turn produced no heading change");
    }
    const double needed = 2.0 * kMinTurnAngle / (turned / span) * 1.05;
    duration = std::min(settings.turn_max_duration, 2.0 * std::max(needed, 0.5 * duration));
  }
}

SwimMetrics straight_metrics(const SwimmerModel& model, const Gait& gait, FinState fin,
                             const StraightRun& run) {
  SwimMetrics m;
  m.frequency = gait.frequency;
  m.fin = fin;
  m.mean_speed = run.steady_speed;
  m.mean_power = run.steady_power_caudal + run.steady_power_dorsal;
  const CotSplit split = cot_split(run.steady_power_caudal, run.steady_power_dorsal,
                                   model.robot.mass, run.steady_speed);
  m.cot_caudal = split.caudal;
  m.cot_dorsal = split.dorsal;
  m.cot_total = split.total();
  m.strouhal = strouhal(gait.frequency, peak_to_peak_amplitude(gait_midline(model, gait)),
                        run.steady_speed)
                   .value;
  m.reynolds = reynolds(run.steady_speed, model.robot.body_length);
  m.acceleration = run.accel.acceleration;
  m.r_squared = run.accel.r_squared;
  return m;
}

double run_cost_of_transport(const SwimmerModel& model, const StraightRun& run) {
  return cost_of_transport(run.run_mean_power, model.robot.mass, run.run_mean_speed);
}

}  // namespace finfold
