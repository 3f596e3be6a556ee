#pragma once

#include <optional>

#include "finfold/analysis.hpp"
#include "finfold/hydrodynamics.hpp"

namespace finfold {

inline constexpr double kGravity = 9.81;                // m/s^2
inline constexpr double kWaterKinematicViscosity = 1.0e-6;  // m^2/s, ~20 C
inline constexpr double kStrouhalOptimalLow = 0.25;
inline constexpr double kStrouhalOptimalHigh = 0.35;

// P / (m g U).
double cost_of_transport(double mean_power, double mass, double mean_speed);

struct CotSplit {
  double caudal;
  double dorsal;
  double total() const { return caudal + dorsal; }
};

CotSplit cot_split(double power_caudal, double power_dorsal, double mass, double mean_speed);

struct StrouhalNumber {
  double value;
  bool in_optimal_range;
};

// f A / U with A the peak-to-peak tail amplitude.
StrouhalNumber strouhal(double frequency, double amplitude, double speed);

double reynolds(double speed, double length, double viscosity = kWaterKinematicViscosity);

// Distance from St to the [0.25, 0.35] band; 0 inside it.
double strouhal_band_distance(double st);

struct SwimMetrics {
  double frequency = 0.0;
  FinState fin = FinState::kFolded;
  double mean_speed = 0.0;
  double mean_power = 0.0;
  double cot_total = 0.0;
  double cot_caudal = 0.0;
  double cot_dorsal = 0.0;
  double strouhal = 0.0;
  double reynolds = 0.0;
  double acceleration = 0.0;
  double r_squared = 0.0;
  std::optional<TurnFit> turn;
};

}  // namespace finfold
