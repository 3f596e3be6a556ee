#include "finfold/metrics.hpp"

#include "finfold/error.hpp"

namespace finfold {

double cost_of_transport(double mean_power, double mass, double mean_speed) {
  if (!(mass > 0.0)) throw Error(ErrorKind::kDomain, "mass must be positive");
  if (!(mean_speed > 0.0)) throw Error(ErrorKind::kDomain, "COT needs a positive mean speed");
  return mean_power / (mass * kGravity * mean_speed);
}

CotSplit cot_split(double power_caudal, double power_dorsal, double mass, double mean_speed) {
  return {cost_of_transport(power_caudal, mass, mean_speed),
          cost_of_transport(power_dorsal, mass, mean_speed)};
}

StrouhalNumber strouhal(double frequency, double amplitude, double speed) {
  if (!(speed > 0.0)) throw Error(ErrorKind::kDomain, "Strouhal number needs U > 0");
  const double st = frequency * amplitude / speed;
  return {st, st >= kStrouhalOptimalLow && st <= kStrouhalOptimalHigh};
}

double reynolds(double speed, double length, double viscosity) {
  if (!(speed >= 0.0)) throw Error(ErrorKind::kDomain, "speed must be non-negative");
  if (!(length > 0.0)) throw Error(ErrorKind::kDomain, "length must be positive");
  if (!(viscosity > 0.0)) throw Error(ErrorKind::kDomain, "viscosity must be positive");
  return speed * length / viscosity;
}

double strouhal_band_distance(double st) {
  if (st < kStrouhalOptimalLow) return kStrouhalOptimalLow - st;
  if (st > kStrouhalOptimalHigh) return st - kStrouhalOptimalHigh;
  return 0.0;
}

}  // namespace finfold
