#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "finfold/hydrodynamics.hpp"
#include "finfold/kinematics.hpp"

namespace finfold {

// Servo amplitude the reference midline envelope is defined at.
inline constexpr double kReferenceAmplitudeDeg = 20.0;
inline constexpr double kDefaultTimeStep = 0.002;
inline constexpr double kMaxTimeStep = 0.01;
// Floor on forward speed in the fin sideslip proxy.
inline constexpr double kSideslipSpeedFloor = 0.01;

struct Gait {
  double frequency = 2.0;        // Hz
  double amplitude_deg = 20.0;   // servo half-amplitude
  double turn_bias_deg = 0.0;    // constant offset added to the servo waveform

  void validate() const;
  double period() const { return 1.0 / frequency; }
  double turn_bias_rad() const { return turn_bias_deg * kPi / 180.0; }

  bool operator==(const Gait&) const = default;
};

class FinSchedule {
 public:
  struct Entry {
    double time;
    FinState state;
    bool operator==(const Entry&) const = default;
  };

  // Entries must start at t = 0 with strictly increasing times.
  explicit FinSchedule(std::vector<Entry> entries);

  static FinSchedule constant(FinState state);
  // Erected from rest, folded from fold_time onwards.
  static FinSchedule fold_after(double fold_time);

  // State of the last entry with time <= t. t < 0 is a domain error.
  FinState at(double t) const;

  std::span<const Entry> entries() const { return entries_; }

  bool operator==(const FinSchedule&) const = default;

 private:
  std::vector<Entry> entries_;
};

FinState fin_state_at(const FinSchedule& schedule, double t);

// Electrical power model. P_caudal = p0 + p1 f^3 (amp / 20 deg)^2; the dorsal
// servo draws standby power plus e_fold joules spread over each fold/erect
// action.
struct PowerModel {
  double p0 = 0.8;                    // W
  double p1 = 0.05;                   // W / Hz^3
  double p_standby = 0.25;            // W
  double e_fold = 0.5;                // J
  double fold_action_duration = 0.5;  // s

  void validate() const;
  bool operator==(const PowerModel&) const = default;
};

struct PowerSplit {
  double caudal;
  double dorsal;
  double total() const { return caudal + dorsal; }
};

PowerSplit input_power(const PowerModel& power, const Gait& gait,
                       const FinSchedule& schedule, double t);

// Everything needed to simulate the robot. `midline` is the envelope at the
// reference amplitude; its period is replaced by the gait's.
struct SwimmerModel {
  RobotParams robot;
  MidlineParams midline{0.0, 0.0, 0.0727374, 0.8, 1.0, 0.57};
  PowerModel power;

  void validate() const;
  bool operator==(const SwimmerModel&) const = default;
};

// Midline for a gait: period 1/f, envelope scaled by amplitude / 20 deg.
MidlineParams gait_midline(const SwimmerModel& model, const Gait& gait);

struct TrajectorySample {
  double t;
  double x;
  double y;
  double heading;  // rad, counter-clockwise from +x
  double speed;    // forward speed, m/s
  FinState fin;
  double power_caudal;
  double power_dorsal;

  double power() const { return power_caudal + power_dorsal; }
};

struct Trajectory {
  double dt = kDefaultTimeStep;
  std::vector<TrajectorySample> samples;

  std::size_t size() const { return samples.size(); }
  double duration() const;
  // Throws kValidation unless dt > 0, >= 2 samples, uniform timestamps and
  // non-negative speed.
  void validate() const;

  std::vector<double> times() const;
  std::vector<double> xs() const;
  std::vector<double> ys() const;
  std::vector<double> headings() const;
  std::vector<double> speeds() const;
};

// Surge-only self-propulsion from rest,
//   m (1 + added mass) dU/dt = thrust_gain(fin) T(U) - D(fin, U),
// integrated with fixed-step RK4. The fin state is sampled at the start of
// each step.
Trajectory simulate_straight(const SwimmerModel& model, const Gait& gait,
                             const FinSchedule& schedule, double duration,
                             double dt = kDefaultTimeStep);

// Planar turn from rest under a biased gait. Surge as in simulate_straight;
// yaw obeys
//   Iz dr/dt = k_turn bias 1/2 rho S(fin) U^2 l_tail + F_fin(alpha) l_fin - Nr(fin) r
// with sideslip proxy alpha = atan(r l_fin / max(U, 0.01)).
Trajectory simulate_turn(const SwimmerModel& model, const Gait& gait, FinState fin,
                         double duration, double dt = kDefaultTimeStep);

}  // namespace finfold
