#include "finfold/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "finfold/error.hpp"

namespace finfold {
namespace {

void check_step(double duration, double dt) {
  if (!(duration > 0.0) || !std::isfinite(duration)) {
    throw Error(ErrorKind::kArgument, "duration must be positive");
  }
  if (!(dt > 0.0)) throw Error(ErrorKind::kArgument, "dt must be positive");
  if (dt > kMaxTimeStep) {
    throw Error(ErrorKind::kArgument, "dt must not exceed 0.01 s");
  }
}

std::size_t step_count(double duration, double dt) {
  return static_cast<std::size_t>(std::max(1.0, std::round(duration / dt)));
}

// Net surge acceleration for one fin state with the gait fixed.
struct SurgeModel {
  double static_thrust[2];
  double quadratic[2];  // thrust speed coefficient + drag coefficient
  double inverse_mass;

  SurgeModel(const RobotParams& robot, const MidlineParams& mp) {
    const ThrustCoefficients c = thrust_coefficients(robot, mp);
    for (FinState fin : {FinState::kErected, FinState::kFolded}) {
      const int i = index(fin);
      const double gain = robot.thrust_gain(fin);
      static_thrust[i] = gain * c.static_thrust;
      quadratic[i] = gain * c.speed_coefficient +
                     0.5 * robot.water_density * robot.drag_coefficient *
                         robot.wetted_area(fin);
    }
    inverse_mass = 1.0 / robot.surge_mass();
  }

  static int index(FinState fin) { return fin == FinState::kErected ? 0 : 1; }

  double acceleration(FinState fin, double u) const {
    const int i = index(fin);
    return (static_thrust[i] - quadratic[i] * u * std::abs(u)) * inverse_mass;
  }
};

void check_finite(double value, double t) {
  if (!std::isfinite(value)) {
    throw Error(ErrorKind::kNumericalDivergence,
                "non-finite state at t = " + std::to_string(t));
  }
}

}  // namespace

void Gait::validate() const {
  if (!(frequency > 0.0) || !std::isfinite(frequency)) {
    throw Error(ErrorKind::kValidation, "frequency must be positive");
  }
  if (!(amplitude_deg >= 0.0 && amplitude_deg <= 45.0)) {
    throw Error(ErrorKind::kValidation, "amplitude_deg must lie in [0, 45]");
  }
  if (!(std::abs(turn_bias_deg) <= 45.0)) {
    throw Error(ErrorKind::kValidation, "turn_bias_deg must lie in [-45, 45]");
  }
}

FinSchedule::FinSchedule(std::vector<Entry> entries) : entries_(std::move(entries)) {
  if (entries_.empty()) {
    throw Error(ErrorKind::kValidation, "fin schedule must not be empty");
  }
  if (entries_.front().time != 0.0) {
    throw Error(ErrorKind::kValidation, "fin schedule must start at t = 0");
  }
  for (std::size_t i = 1; i < entries_.size(); ++i) {
    if (!(entries_[i].time > entries_[i - 1].time)) {
      throw Error(ErrorKind::kValidation, "fin schedule times must increase strictly");
    }
  }
}

FinSchedule FinSchedule::constant(FinState state) { return FinSchedule({{0.0, state}}); }

FinSchedule FinSchedule::fold_after(double fold_time) {
  if (!(fold_time > 0.0)) {
    throw Error(ErrorKind::kArgument, "fold time must be positive");
  }
  return FinSchedule({{0.0, FinState::kErected}, {fold_time, FinState::kFolded}});
}

FinState FinSchedule::at(double t) const {
  if (!(t >= 0.0)) throw Error(ErrorKind::kDomain, "fin schedule queried at t < 0");
  auto it = std::upper_bound(entries_.begin(), entries_.end(), t,
                             [](double value, const Entry& e) { return value < e.time; });
  return std::prev(it)->state;
}

FinState fin_state_at(const FinSchedule& schedule, double t) { return schedule.at(t); }

void PowerModel::validate() const {
  if (!(p0 >= 0.0)) throw Error(ErrorKind::kValidation, "p0 must be non-negative");
  if (!(p1 >= 0.0)) throw Error(ErrorKind::kValidation, "p1 must be non-negative");
  if (!(p_standby >= 0.0)) throw Error(ErrorKind::kValidation, "p_standby must be non-negative");
  if (!(e_fold >= 0.0)) throw Error(ErrorKind::kValidation, "e_fold must be non-negative");
  if (!(fold_action_duration > 0.0)) {
    throw Error(ErrorKind::kValidation, "fold_action_duration must be positive");
  }
}

PowerSplit input_power(const PowerModel& power, const Gait& gait,
                       const FinSchedule& schedule, double t) {
  if (!(t >= 0.0)) throw Error(ErrorKind::kDomain, "power queried at t < 0");
  const double amplitude = gait.amplitude_deg / kReferenceAmplitudeDeg;
  const double f = gait.frequency;
  PowerSplit split{power.p0 + power.p1 * f * f * f * amplitude * amplitude,
                   power.p_standby};

  const auto entries = schedule.entries();
  for (std::size_t i = 1; i < entries.size(); ++i) {
    if (entries[i].state == entries[i - 1].state) continue;
    const double start = entries[i].time;
    if (t >= start && t < start + power.fold_action_duration) {
      split.dorsal += power.e_fold / power.fold_action_duration;
    }
  }
  return split;
}

void SwimmerModel::validate() const {
  robot.validate();
  midline.validate();
  power.validate();
  if (std::abs(midline.body_length - robot.body_length) > 1e-12) {
    throw Error(ErrorKind::kValidation,
                "midline body_length must equal robot body_length");
  }
}

MidlineParams gait_midline(const SwimmerModel& model, const Gait& gait) {
  MidlineParams mp =
      scale_envelope(model.midline, gait.amplitude_deg / kReferenceAmplitudeDeg);
  mp.period = gait.period();
  return mp;
}

double Trajectory::duration() const {
  return samples.empty() ? 0.0 : samples.back().t - samples.front().t;
}

void Trajectory::validate() const {
  if (!(dt > 0.0)) throw Error(ErrorKind::kValidation, "trajectory dt must be positive");
  if (samples.size() < 2) {
    throw Error(ErrorKind::kValidation, "trajectory needs at least 2 samples");
  }
  const double t0 = samples.front().t;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double expected = t0 + static_cast<double>(i) * dt;
    if (std::abs(samples[i].t - expected) > 1e-6 * dt + 1e-12 * std::abs(expected)) {
      throw Error(ErrorKind::kValidation, "trajectory timestamps are not uniform");
    }
    if (!(samples[i].speed >= 0.0)) {
      throw Error(ErrorKind::kValidation, "trajectory speed must be non-negative");
    }
  }
}

namespace {
template <typename Field>
std::vector<double> column(const std::vector<TrajectorySample>& samples, Field field) {
  std::vector<double> out;
  out.reserve(samples.size());
  for (const auto& s : samples) out.push_back(s.*field);
  return out;
}
}  // namespace

std::vector<double> Trajectory::times() const { return column(samples, &TrajectorySample::t); }
std::vector<double> Trajectory::xs() const { return column(samples, &TrajectorySample::x); }
std::vector<double> Trajectory::ys() const { return column(samples, &TrajectorySample::y); }
std::vector<double> Trajectory::headings() const {
  return column(samples, &TrajectorySample::heading);
}
std::vector<double> Trajectory::speeds() const {
  return column(samples, &TrajectorySample::speed);
}

Trajectory simulate_straight(const SwimmerModel& model, const Gait& gait,
                             const FinSchedule& schedule, double duration, double dt) {
  check_step(duration, dt);
  model.validate();
  gait.validate();

  const SurgeModel surge(model.robot, gait_midline(model, gait));
  const std::size_t steps = step_count(duration, dt);

  Trajectory traj;
  traj.dt = dt;
  traj.samples.reserve(steps + 1);

  double x = 0.0;
  double u = 0.0;
  for (std::size_t n = 0;; ++n) {
    const double t = static_cast<double>(n) * dt;
    const FinState fin = schedule.at(t);
    const PowerSplit power = input_power(model.power, gait, schedule, t);
    traj.samples.push_back({t, x, 0.0, 0.0, std::max(u, 0.0), fin, power.caudal,
                            power.dorsal});
    if (n == steps) break;

    const double k1 = surge.acceleration(fin, u);
    const double u2 = u + 0.5 * dt * k1;
    const double k2 = surge.acceleration(fin, u2);
    const double u3 = u + 0.5 * dt * k2;
    const double k3 = surge.acceleration(fin, u3);
    const double u4 = u + dt * k3;
    const double k4 = surge.acceleration(fin, u4);

    x += dt / 6.0 * (u + 2.0 * u2 + 2.0 * u3 + u4);
    u += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    check_finite(x, t + dt);
    check_finite(u, t + dt);
  }
  return traj;
}

namespace {

struct PlanarState {
  double x, y, heading, speed, yaw_rate;

  PlanarState operator+(const PlanarState& o) const {
    return {x + o.x, y + o.y, heading + o.heading, speed + o.speed, yaw_rate + o.yaw_rate};
  }
  PlanarState operator*(double s) const {
    return {x * s, y * s, heading * s, speed * s, yaw_rate * s};
  }
};

}  // namespace

Trajectory simulate_turn(const SwimmerModel& model, const Gait& gait, FinState fin,
                         double duration, double dt) {
  check_step(duration, dt);
  model.validate();
  gait.validate();
  if (gait.turn_bias_deg == 0.0) {
    throw Error(ErrorKind::kArgument, "simulate_turn needs a non-zero turn bias");
  }

  const RobotParams& robot = model.robot;
  const SurgeModel surge(robot, gait_midline(model, gait));
  const FinSchedule schedule = FinSchedule::constant(fin);
  const double tail_moment_per_u2 = robot.turn_gain * gait.turn_bias_rad() * 0.5 *
                                    robot.water_density * robot.wetted_area(fin) *
                                    robot.tail_moment_arm;
  const double damping = robot.yaw_damping(fin);

  auto derivative = [&](const PlanarState& s) -> PlanarState {
    const double alpha =
        std::atan(s.yaw_rate * robot.fin_moment_arm / std::max(s.speed, kSideslipSpeedFloor));
    const double fin_moment =
        fin_lateral_force(robot, fin, s.speed, alpha) * robot.fin_moment_arm;
    const double tail_moment = tail_moment_per_u2 * s.speed * s.speed;
    return {s.speed * std::cos(s.heading), s.speed * std::sin(s.heading), s.yaw_rate,
            surge.acceleration(fin, s.speed),
            (tail_moment + fin_moment - damping * s.yaw_rate) / robot.yaw_inertia};
  };

  const std::size_t steps = step_count(duration, dt);
  Trajectory traj;
  traj.dt = dt;
  traj.samples.reserve(steps + 1);

  PlanarState s{0.0, 0.0, 0.0, 0.0, 0.0};
  for (std::size_t n = 0;; ++n) {
    const double t = static_cast<double>(n) * dt;
    const PowerSplit power = input_power(model.power, gait, schedule, t);
    traj.samples.push_back({t, s.x, s.y, s.heading, std::max(s.speed, 0.0), fin,
                            power.caudal, power.dorsal});
    if (n == steps) break;

    const PlanarState k1 = derivative(s);
    const PlanarState k2 = derivative(s + k1 * (0.5 * dt));
    const PlanarState k3 = derivative(s + k2 * (0.5 * dt));
    const PlanarState k4 = derivative(s + k3 * dt);
    s = s + (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (dt / 6.0);
    for (double v : {s.x, s.y, s.heading, s.speed, s.yaw_rate}) check_finite(v, t + dt);
  }
  return traj;
}

}  // namespace finfold
