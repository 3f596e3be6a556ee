#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "finfold/calibration.hpp"
#include "finfold/dynamics.hpp"
#include "finfold/experiment.hpp"

namespace finfold {

struct SweepSpec {
  double f_min = 1.0;
  double f_max = 3.0;
  double f_step = 0.2;
  std::vector<FinState> fin_states{FinState::kErected, FinState::kFolded};
  double amplitude_deg = kReferenceAmplitudeDeg;
  double turn_bias_deg = 30.0;
  bool include_turns = true;

  bool operator==(const SweepSpec&) const = default;
};

// JSON experiment description. Every section and key is optional; missing
// values take the defaults below. Unknown keys are rejected.
//
//   {
//     "seed": 0,
//     "robot":   { <RobotParams fields> },
//     "midline": { "a0", "a1", "a2", "wavelength" },   // at 20 deg
//     "power":   { "p0", "p1", "p_standby", "e_fold", "fold_action_duration" },
//     "simulation": { "dt", "straight_duration", "steady_window",
//                     "turn_duration", "turn_max_duration",
//                     "phase_window", "phase_threshold", "phase_hold",
//                     "markers", "speed_marker_fraction" },
//     "gaits": [ { "frequency", "amplitude_deg", "turn_bias_deg" } ],
//     "schedules": { "<name>": [ [t, "erected" | "folded"], ... ] },
//     "sweep": { "f_min", "f_max", "f_step", "fin_states", "amplitude_deg",
//                "turn_bias_deg", "include_turns" },
//     "output_dir": "out",
//     "calibration_file": "calibration.json"   // must exist if given
//   }
struct ExperimentConfig {
  std::uint64_t seed = 0;
  SwimmerModel model;
  ExperimentSettings simulation;
  int markers = kDefaultMarkerCount;
  double speed_marker_fraction = 0.35;
  std::vector<Gait> gaits;
  std::map<std::string, FinSchedule> schedules;
  SweepSpec sweep;
  std::string output_dir = "out";
  std::optional<std::string> calibration_file;

  void validate() const;
  bool operator==(const ExperimentConfig&) const = default;
};

// Parse errors carry line and column; validation errors name the field
// (e.g. "robot.mass: must be positive").
ExperimentConfig parse_experiment_config(std::string_view text,
                                         const std::filesystem::path& base_dir = {});
ExperimentConfig load_experiment_config(const std::filesystem::path& path);
std::string serialize_experiment_config(const ExperimentConfig& config);

// Seed precedence: explicit flag, then FINFOLD_SEED, then the config.
std::uint64_t resolve_seed(std::optional<std::uint64_t> flag, const ExperimentConfig& config);

// Calibration file: { "parameters": {name: value}, "bounds": {name: [lo, hi]},
// "residuals": {target: {...}}, "objective", "seed", "passed" }.
std::string serialize_calibration(const CalibrationResult& result);
void write_calibration_file(const std::filesystem::path& path, const CalibrationResult& result);
// Returns the parameter values keyed by name.
std::map<std::string, double> read_calibration_file(const std::filesystem::path& path);
// Overwrites model coefficients with calibrated values.
SwimmerModel apply_calibration(const SwimmerModel& base,
                               const std::map<std::string, double>& values);

// Model with the config's calibration file (if any) applied.
SwimmerModel effective_model(const ExperimentConfig& config);

}  // namespace finfold
