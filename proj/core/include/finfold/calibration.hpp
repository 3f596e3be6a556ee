#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "finfold/dynamics.hpp"
#include "finfold/experiment.hpp"
#include "finfold/nelder_mead.hpp"

namespace finfold {

// One tunable model coefficient with its box bounds. Fixed parameters keep
// their value and are not searched.
struct ParameterSpec {
  std::string name;
  double value;
  double lower;
  double upper;
  bool free = true;

  bool operator==(const ParameterSpec&) const = default;
};

// Recognised names:
//   envelope_a2, wavelength, drag_coefficient, wetted_area_folded,
//   wetted_area_delta (erected - folded), tail_span, added_mass_factor,
//   fin_lift_area (lift slope x fin area), turn_gain, yaw_damping_folded,
//   yaw_damping_erected, p0, p1, p_standby, thrust_gain_erected
class FreeParameters {
 public:
  FreeParameters() = default;
  explicit FreeParameters(std::vector<ParameterSpec> specs);

  // All recognised parameters, valued from `model`, with default bounds.
  // Free by default: envelope_a2, drag_coefficient, wetted_area_delta,
  // added_mass_factor, fin_lift_area, thrust_gain_erected.
  static FreeParameters from_model(const SwimmerModel& model);
  static const std::vector<std::string>& names();

  const std::vector<ParameterSpec>& specs() const { return specs_; }
  const ParameterSpec& spec(std::string_view name) const;
  double value(std::string_view name) const { return spec(name).value; }
  void set_value(std::string_view name, double value);
  void set_bounds(std::string_view name, double lower, double upper);
  void set_free(std::string_view name, bool free);
  // Marks every parameter fixed except those listed.
  void free_only(const std::vector<std::string>& names);
  std::size_t free_count() const;

  // Throws kValidation on unknown names, empty bounds, or values outside
  // their bounds.
  void validate() const;

  // Writes every parameter into a copy of `base`.
  SwimmerModel apply(SwimmerModel base) const;

  bool operator==(const FreeParameters&) const = default;

 private:
  ParameterSpec& mutable_spec(std::string_view name);
  std::vector<ParameterSpec> specs_;
};

enum class Observable {
  kFoldedSpeed,          // steady speed, folded, at speed_frequency (m/s)
  kErectedAcceleration,  // fitted acceleration, erected, at accel_frequency (m/s^2)
  kAccelerationGain,     // a_erected / a_folded - 1 at accel_frequency
  kSpeedDecrease,        // 1 - U_erected / U_folded at speed_frequency
  kCotIncrease,          // COT_erected / COT_folded - 1 at speed_frequency
  kTurnRateGain,         // mean over turn frequencies of w_e / w_f - 1
  kTurnRadiusReduction,  // mean over turn frequencies of 1 - R_e / R_f
  kFoldPolicyCotPenalty, // whole-run COT, fold-after-acceleration vs folded, - 1
};

std::string_view to_string(Observable observable) noexcept;
Observable parse_observable(std::string_view text);

// A point target has lower == upper. Band targets contribute nothing inside
// [lower, upper] and a quadratic hinge outside. Errors are relative to the
// violated bound. `tolerance` is absolute, in the observable's units.
struct CalibrationTarget {
  std::string name;
  Observable observable;
  double lower;
  double upper;
  double weight = 1.0;
  double tolerance = 0.0;
  bool hard = false;

  bool is_band() const { return lower != upper; }
  // Signed relative distance outside the band (0 inside).
  double relative_error(double simulated) const;
  // Absolute distance outside the band.
  double excess(double simulated) const;
};

struct CalibrationTargets {
  std::vector<CalibrationTarget> targets;

  void validate() const;
  // Reference robot figures: folded 0.338 m/s at 2.6 Hz, erected 0.1302
  // m/s^2 at 3 Hz with a 15.7 % gain, 3.431-16.595 % speed loss, 32.78 % /
  // 33.13 % turning deltas, COT increase <= 13.47 %, fold-after-acceleration
  // COT penalty <= 5.02 %.
  static CalibrationTargets defaults();
};

struct ObservableSettings {
  double speed_frequency = 2.6;
  double accel_frequency = 3.0;
  std::vector<double> turn_frequencies{1.5, 2.0, 2.5, 3.0};
  double policy_frequency = 2.6;
  double amplitude_deg = kReferenceAmplitudeDeg;
  double turn_bias_deg = 30.0;
  ExperimentSettings experiment = coarse_settings();

  static ExperimentSettings coarse_settings() {
    ExperimentSettings s;
    s.dt = 0.01;
    s.turn_duration = 20.0;
    s.turn_max_duration = 60.0;
    return s;
  }
};

using ObservableValues = std::map<Observable, double>;

// Simulates only what the requested observables need.
ObservableValues evaluate_observables(const SwimmerModel& model,
                                      const ObservableSettings& settings,
                                      const std::vector<Observable>& requested);

struct TargetResidual {
  std::string name;
  Observable observable;
  double simulated;
  double lower;
  double upper;
  double relative_error;
  bool within_tolerance;
  bool hard;
};

struct RestartSummary {
  std::vector<double> start;
  double start_objective;
  double final_objective;
  int evaluations;
};

struct CalibrationOptions {
  int restarts = 5;
  int max_evaluations = 1500;  // per restart
  // A restart stops once its objective falls to this; every target is then
  // far inside its tolerance.
  double objective_goal = 1e-7;
  ObservableSettings observables;
  unsigned workers = 1;
};

struct CalibrationResult {
  FreeParameters parameters;
  double objective = 0.0;
  std::vector<TargetResidual> residuals;
  std::vector<RestartSummary> restarts;
  std::uint64_t seed = 0;
  // False when any hard target misses its tolerance.
  bool passed = false;
};

// Weighted sum of squared relative errors; +inf if the model is invalid or
// any simulation/analysis step fails.
double calibration_objective(const SwimmerModel& base, const FreeParameters& params,
                             const CalibrationTargets& targets,
                             const ObservableSettings& settings);

std::vector<TargetResidual> target_residuals(const SwimmerModel& model,
                                             const CalibrationTargets& targets,
                                             const ObservableSettings& settings);

// Minimises calibration_objective over the free parameters. Restart 0 starts
// from the supplied values, the rest from seeded uniform draws inside the
// bounds. Throws kCalibrationFailure if every restart stays non-finite.
CalibrationResult calibrate_model(const SwimmerModel& base, const CalibrationTargets& targets,
                                  const FreeParameters& params, std::uint64_t seed,
                                  const CalibrationOptions& options = {});

// --- post-calibration checks -----------------------------------------------

struct ValidationOptions {
  double f_min = 1.0;
  double f_max = 3.0;
  double f_step = 0.2;
  double ordering_min_frequency = 1.2;
  double amplitude_deg = kReferenceAmplitudeDeg;
  double turn_bias_deg = 30.0;
  ExperimentSettings experiment;
  unsigned workers = 1;

  // Thresholds, as fractions.
  double r_squared_gate = 0.95;
  double speed_decrease_low = 0.03431 - 0.01;
  double speed_decrease_high = 0.16595 + 0.01;
  double cot_increase_cap = 0.1347 + 0.02;
  double turn_rate_gain = 0.3278;
  double turn_radius_reduction = 0.3313;
  double turn_delta_tolerance = 0.05;
  double fold_policy_cot_cap = 0.0502 + 0.01;
  double fold_policy_speed_tolerance = 0.005;
};

struct ValidationRow {
  double frequency = 0.0;
  SwimMetrics erected;
  SwimMetrics folded;
  TurnFit turn_erected{};
  TurnFit turn_folded{};
  double fold_policy_cot = 0.0;
  double folded_run_cot = 0.0;
  double fold_policy_final_speed = 0.0;
  double folded_final_speed = 0.0;
  std::string error;  // non-empty when a run failed
};

struct Assertion {
  std::string name;
  bool passed;
  std::string detail;
};

struct ValidationReport {
  std::vector<ValidationRow> rows;
  std::vector<Assertion> assertions;
  double mean_turn_rate_gain = 0.0;
  double mean_turn_radius_reduction = 0.0;

  bool all_passed() const;
  const Assertion* find(std::string_view name) const;
};

std::vector<double> frequency_grid(double f_min, double f_max, double f_step);

// Sweeps f in both fin states (straight, turn and fold-after-acceleration
// runs) and checks the erect-vs-fold orderings. Failures are reported, not
// thrown, except for an invalid model.
ValidationReport validate_model(const SwimmerModel& model, const ValidationOptions& options = {});

}  // namespace finfold
