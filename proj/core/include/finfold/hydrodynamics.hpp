#pragma once

#include <string_view>

#include "finfold/kinematics.hpp"

namespace finfold {

enum class FinState { kErected, kFolded };

std::string_view to_string(FinState state) noexcept;

// Accepts "erected" / "folded" (case-sensitive). Throws kParse otherwise.
FinState parse_fin_state(std::string_view text);

// Physical plant. SI units throughout; the defaults are the shipped
// calibration against the reference robot (2.305 kg, 0.57 m).
struct RobotParams {
  double mass = 2.305;                // kg
  double added_mass_factor = 1.59876; // multiplies mass for surge
  double body_length = 0.57;          // m
  double tail_span = 0.12;            // m
  double water_density = 1000.0;      // kg/m^3
  double drag_coefficient = 0.0595429;
  double wetted_area_folded = 0.12;   // m^2
  double wetted_area_erected = 0.1867524;  // m^2
  double fin_area = 0.002947009;      // m^2
  double fin_lift_slope = 2.0 * kPi;  // 1/rad
  double yaw_inertia = 0.05;          // kg m^2
  double yaw_damping_folded = 0.3;    // N m s
  double yaw_damping_erected = 0.3;   // N m s
  double fin_moment_arm = 0.1;        // m
  double tail_moment_arm = 0.3;       // m
  double turn_gain = 0.2;             // yaw moment per unit tail bias
  // Multiplies the cycle-mean thrust while the median fins are erected.
  double thrust_gain_erected = 1.208956;

  // Throws kValidation naming the offending field.
  void validate() const;

  double wetted_area(FinState fin) const {
    return fin == FinState::kErected ? wetted_area_erected : wetted_area_folded;
  }
  double yaw_damping(FinState fin) const {
    return fin == FinState::kErected ? yaw_damping_erected : yaw_damping_folded;
  }
  double thrust_gain(FinState fin) const {
    return fin == FinState::kErected ? thrust_gain_erected : 1.0;
  }
  double surge_mass() const { return mass * added_mass_factor; }

  bool operator==(const RobotParams&) const = default;
};

// Cycle-averaged elongated-body thrust evaluated at the tail tip:
//
//   T = (m_a / 2) [ <h_t^2> - U^2 <h_x^2> ],   m_a = rho pi s^2 / 4
//   <h_t^2> = A(L)^2 w^2 / 2,  <h_x^2> = (A'(L)^2 + A(L)^2 k^2) / 2
//
// Independent of fin state; see propulsive_thrust() for the fin-dependent
// gain.
double mean_thrust(const RobotParams& p, const MidlineParams& mp, double speed);

// mean_thrust(U) = static_thrust - speed_coefficient * U^2.
struct ThrustCoefficients {
  double static_thrust;
  double speed_coefficient;
};
ThrustCoefficients thrust_coefficients(const RobotParams& p, const MidlineParams& mp);

// thrust_gain(fin) * mean_thrust(p, mp, speed).
double propulsive_thrust(const RobotParams& p, const MidlineParams& mp, FinState fin,
                         double speed);

// 1/2 rho Cd S(fin) U^2.
double drag_force(const RobotParams& p, FinState fin, double speed);

// Linear hydrofoil lift of the erected fin at incidence alpha (rad). Folded
// fins produce no side force. |alpha| >= pi/2 is a domain error.
double fin_lateral_force(const RobotParams& p, FinState fin, double speed, double alpha);

}  // namespace finfold
