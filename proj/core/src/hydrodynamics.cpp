#include "finfold/hydrodynamics.hpp"

#include <cmath>
#include <string>

#include "finfold/error.hpp"

namespace finfold {
namespace {

void require_positive(double value, const char* field) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    throw Error(ErrorKind::kValidation, std::string(field) + " must be positive");
  }
}

void require_non_negative_speed(double speed) {
  if (!(speed >= 0.0)) {
    throw Error(ErrorKind::kDomain, "speed must be non-negative");
  }
}

}  // namespace

std::string_view to_string(FinState state) noexcept {
  return state == FinState::kErected ? "erected" : "folded";
}

FinState parse_fin_state(std::string_view text) {
  if (text == "erected") return FinState::kErected;
  if (text == "folded") return FinState::kFolded;
  throw Error(ErrorKind::kParse, "unknown fin state '" + std::string(text) + "'");
}

void RobotParams::validate() const {
  require_positive(mass, "mass");
  require_positive(added_mass_factor, "added_mass_factor");
  require_positive(body_length, "body_length");
  require_positive(tail_span, "tail_span");
  require_positive(water_density, "water_density");
  require_positive(drag_coefficient, "drag_coefficient");
  require_positive(wetted_area_folded, "wetted_area_folded");
  require_positive(wetted_area_erected, "wetted_area_erected");
  require_positive(fin_area, "fin_area");
  require_positive(fin_lift_slope, "fin_lift_slope");
  require_positive(yaw_inertia, "yaw_inertia");
  require_positive(yaw_damping_folded, "yaw_damping_folded");
  require_positive(yaw_damping_erected, "yaw_damping_erected");
  require_positive(fin_moment_arm, "fin_moment_arm");
  require_positive(tail_moment_arm, "tail_moment_arm");
  require_positive(turn_gain, "turn_gain");
  require_positive(thrust_gain_erected, "thrust_gain_erected");
  if (!(wetted_area_erected > wetted_area_folded)) {
    throw Error(ErrorKind::kValidation,
                "wetted_area_erected must exceed wetted_area_folded");
  }
}

ThrustCoefficients thrust_coefficients(const RobotParams& p, const MidlineParams& mp) {
  const double added_mass = p.water_density * kPi * p.tail_span * p.tail_span / 4.0;
  const double amplitude = amplitude_envelope(mp, mp.body_length);
  const double slope = envelope_slope(mp, mp.body_length);
  const double omega = mp.angular_frequency();
  const double k = mp.wavenumber();
  const double lateral_velocity_sq = 0.5 * amplitude * amplitude * omega * omega;
  const double lateral_slope_sq =
      0.5 * (slope * slope + amplitude * amplitude * k * k);
  return {0.5 * added_mass * lateral_velocity_sq, 0.5 * added_mass * lateral_slope_sq};
}

double mean_thrust(const RobotParams& p, const MidlineParams& mp, double speed) {
  require_non_negative_speed(speed);
  const ThrustCoefficients c = thrust_coefficients(p, mp);
  return c.static_thrust - c.speed_coefficient * speed * speed;
}

double propulsive_thrust(const RobotParams& p, const MidlineParams& mp, FinState fin,
                         double speed) {
  return p.thrust_gain(fin) * mean_thrust(p, mp, speed);
}

double drag_force(const RobotParams& p, FinState fin, double speed) {
  require_non_negative_speed(speed);
  return 0.5 * p.water_density * p.drag_coefficient * p.wetted_area(fin) * speed * speed;
}

double fin_lateral_force(const RobotParams& p, FinState fin, double speed, double alpha) {
  if (!(std::abs(alpha) < 0.5 * kPi)) {
    throw Error(ErrorKind::kDomain, "fin incidence must satisfy |alpha| < pi/2");
  }
  if (fin == FinState::kFolded) return 0.0;
  return 0.5 * p.water_density * p.fin_lift_slope * alpha * p.fin_area * speed * speed;
}

}  // namespace finfold
