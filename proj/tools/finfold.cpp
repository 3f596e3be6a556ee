// finfold: command-line front end for the swimmer simulator.
//
// Every subcommand prints results on stdout. Failures print one line
// "<error_class>: <message>" on stderr and exit nonzero.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "finfold/analysis.hpp"
#include "finfold/calibration.hpp"
#include "finfold/config.hpp"
#include "finfold/error.hpp"
#include "finfold/experiment.hpp"
#include "finfold/metrics.hpp"
#include "finfold/report.hpp"
#include "finfold/sweep.hpp"
#include "finfold/trajectory_io.hpp"
#include "json.hpp"

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace finfold {
namespace {

ExperimentConfig load_or_default(const std::string& path) {
  return path.empty() ? ExperimentConfig{} : load_experiment_config(path);
}

ordered_json turn_json(const TurnFit& t) {
  return {{"radius_m", t.radius},
          {"angular_speed_radps", t.angular_speed},
          {"center_x", t.center_x},
          {"center_y", t.center_y},
          {"residual_rms_m", t.residual_rms},
          {"mean_path_speed_mps", t.mean_path_speed}};
}

ordered_json metrics_json(const SwimMetrics& m) {
  ordered_json j = {{"f_hz", m.frequency},
                    {"fin_state", std::string(to_string(m.fin))},
                    {"speed_mps", m.mean_speed},
                    {"power_w", m.mean_power},
                    {"accel_mps2", m.acceleration},
                    {"r2", m.r_squared},
                    {"cot_total", m.cot_total},
                    {"cot_caudal", m.cot_caudal},
                    {"cot_dorsal", m.cot_dorsal},
                    {"st", m.strouhal},
                    {"re", m.reynolds}};
  if (m.turn) j["turn"] = turn_json(*m.turn);
  return j;
}

// --- simulate ---------------------------------------------------------------

struct SimulateArgs {
  std::string config;
  double frequency = 2.0;
  double amplitude = kReferenceAmplitudeDeg;
  double bias = 0.0;
  std::string fin = "folded";
  std::string schedule;
  double duration = 30.0;
  std::optional<double> dt;
  std::string out = "trajectory.csv";
  std::optional<int> markers;
};

void run_simulate(const SimulateArgs& a) {
  const ExperimentConfig cfg = load_or_default(a.config);
  const SwimmerModel model = effective_model(cfg);
  const double dt = a.dt.value_or(cfg.simulation.dt);
  const Gait gait{a.frequency, a.amplitude, a.bias};
  gait.validate();

  Trajectory traj;
  if (a.bias != 0.0) {
    if (!a.schedule.empty()) {
      throw Error(ErrorKind::kArgument, "--schedule applies to straight runs only");
    }
    traj = simulate_turn(model, gait, parse_fin_state(a.fin), a.duration, dt);
  } else {
    FinSchedule schedule = FinSchedule::constant(parse_fin_state(a.fin));
    if (!a.schedule.empty()) {
      auto it = cfg.schedules.find(a.schedule);
      if (it == cfg.schedules.end()) {
        throw Error(ErrorKind::kArgument, "no schedule named '" + a.schedule + "' in config");
      }
      schedule = it->second;
    }
    traj = simulate_straight(model, gait, schedule, a.duration, dt);
  }
  const int markers = a.markers.value_or(cfg.markers);
  write_marker_csv(a.out, model, gait, traj, markers);
  const auto& last = traj.samples.back();
  ordered_json j = {{"output", a.out},
                    {"samples", traj.size()},
                    {"markers", markers},
                    {"final", {{"t", last.t}, {"x", last.x}, {"y", last.y},
                               {"heading", last.heading}, {"speed", last.speed}}}};
  std::cout << j.dump(2) << "\n";
}

// --- analyze ----------------------------------------------------------------

struct AnalyzeArgs {
  std::string config;
  std::string input;
  std::optional<int> marker;
  std::string mode = "straight";
};

void run_analyze(const AnalyzeArgs& a) {
  const ExperimentConfig cfg = load_or_default(a.config);
  const MarkerData data = ingest_trajectory_csv(a.input);
  const int count = static_cast<int>(data.markers.size());
  const int id = a.marker.value_or(
      count >= 2 ? reference_marker(count, cfg.speed_marker_fraction) : data.markers.begin()->first);
  auto it = data.markers.find(id);
  if (it == data.markers.end()) {
    throw Error(ErrorKind::kArgument, "marker " + std::to_string(id) + " not present");
  }
  const Trajectory traj = series_to_trajectory(it->second, data.dt);

  ordered_json j = {{"input", a.input},
                    {"marker", id},
                    {"samples", traj.size()},
                    {"dt", data.dt},
                    {"resampled", data.resampled}};
  if (a.mode == "straight") {
    const double t_end = detect_phases(traj, cfg.simulation.phases);
    const double t0 = traj.samples.front().t;
    const AccelFit fit = fit_constant_acceleration(traj, {t0, t_end});
    const double t1 = traj.samples.back().t;
    const double steady_begin = std::max(t_end, t1 - cfg.simulation.steady_window);
    j["accel_end_s"] = t_end;
    j["accel_mps2"] = fit.acceleration;
    j["r2"] = fit.r_squared;
    j["steady_speed_mps"] = fit_steady_speed(traj, {steady_begin, t1});
    // Head heave: lateral excursion of the foremost marker over the steady part.
    const auto& nose = data.markers.begin()->second;
    std::vector<double> lateral;
    for (std::size_t i = 0; i < nose.size(); ++i) {
      if (nose.t[i] >= steady_begin) lateral.push_back(nose.y[i]);
    }
    try {
      j["head_heave_m"] = head_heave_amplitude(lateral);
    } catch (const Error&) {
      j["head_heave_m"] = nullptr;
    }
  } else if (a.mode == "turn") {
    j["turn"] = turn_json(fit_turning(traj));
  } else {
    throw Error(ErrorKind::kArgument, "--mode must be straight or turn");
  }
  std::cout << j.dump(2) << "\n";
}

// --- metrics ----------------------------------------------------------------

struct MetricsArgs {
  std::string config;
  double frequency = 2.0;
  double amplitude = kReferenceAmplitudeDeg;
  std::string fin = "folded";
  double turn_bias = 0.0;
  // Direct evaluation when --power and --speed are both given.
  std::optional<double> power;
  std::optional<double> speed;
  std::optional<double> mass;
  std::optional<double> tail_amplitude;
  std::optional<double> length;
};

void run_metrics(const MetricsArgs& a) {
  const ExperimentConfig cfg = load_or_default(a.config);
  const SwimmerModel model = effective_model(cfg);
  if (a.power || a.speed) {
    if (!a.power || !a.speed) {
      throw Error(ErrorKind::kArgument, "--power and --speed must be given together");
    }
    const double mass = a.mass.value_or(model.robot.mass);
    const double length = a.length.value_or(model.robot.body_length);
    const double amp = a.tail_amplitude.value_or(peak_to_peak_amplitude(
        gait_midline(model, Gait{a.frequency, a.amplitude, 0.0})));
    const StrouhalNumber st = strouhal(a.frequency, amp, *a.speed);
    ordered_json j = {{"cot", cost_of_transport(*a.power, mass, *a.speed)},
                      {"st", st.value},
                      {"st_in_optimal_range", st.in_optimal_range},
                      {"re", reynolds(*a.speed, length)}};
    std::cout << j.dump(2) << "\n";
    return;
  }
  const SweepCell cell =
      run_sweep_cell(model, cfg.simulation, Gait{a.frequency, a.amplitude, a.turn_bias},
                     parse_fin_state(a.fin), a.turn_bias != 0.0);
  if (!cell.metrics) throw Error(ErrorKind::kNumericalDivergence, cell.notes);
  ordered_json j = metrics_json(*cell.metrics);
  if (!cell.notes.empty()) j["notes"] = cell.notes;
  std::cout << j.dump(2) << "\n";
}

// --- calibrate --------------------------------------------------------------

struct CalibrateArgs {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out = "calibration.json";
  int restarts = 5;
  int max_evaluations = 1500;
  unsigned workers = 1;
  std::vector<std::string> free;
};

void run_calibrate(const CalibrateArgs& a) {
  const ExperimentConfig cfg = load_or_default(a.config);
  const SwimmerModel model = effective_model(cfg);
  const std::uint64_t seed = resolve_seed(a.seed, cfg);
  FreeParameters params = FreeParameters::from_model(model);
  if (!a.free.empty()) params.free_only(a.free);
  CalibrationOptions options;
  options.restarts = a.restarts;
  options.max_evaluations = a.max_evaluations;
  options.workers = a.workers;
  const CalibrationResult result =
      calibrate_model(model, CalibrationTargets::defaults(), params, seed, options);
  write_calibration_file(a.out, result);

  std::printf("%-26s %12s %12s %12s %s\n", "target", "simulated", "lower", "upper", "ok");
  for (const auto& r : result.residuals) {
    std::printf("%-26s %12.6g %12.6g %12.6g %s\n", r.name.c_str(), r.simulated, r.lower, r.upper,
                r.within_tolerance ? "yes" : "NO");
  }
  std::printf("objective %.6g, seed %llu, written to %s\n", result.objective,
              static_cast<unsigned long long>(seed), a.out.c_str());
  if (!result.passed) {
    throw Error(ErrorKind::kCalibrationFailure, "a hard target missed its tolerance");
  }
}

// --- validate ---------------------------------------------------------------

struct ValidateArgs {
  std::string config;
  unsigned workers = 1;
};

void run_validate(const ValidateArgs& a) {
  const ExperimentConfig cfg = load_or_default(a.config);
  ValidationOptions options;
  options.experiment = cfg.simulation;
  options.workers = a.workers;
  const ValidationReport report = validate_model(effective_model(cfg), options);
  int failed = 0;
  for (const auto& as : report.assertions) {
    std::printf("%s %s: %s\n", as.passed ? "PASS" : "FAIL", as.name.c_str(), as.detail.c_str());
    if (!as.passed) ++failed;
  }
  if (failed > 0) {
    throw Error(ErrorKind::kValidation, std::to_string(failed) + " assertion(s) failed");
  }
}

// --- sweep / report ---------------------------------------------------------

struct SweepArgs {
  std::string config;
  std::string out;
  unsigned workers = 1;
};

void run_sweep_cmd(const SweepArgs& a) {
  const ExperimentConfig cfg = load_or_default(a.config);
  const SweepResult result = run_sweep(cfg, a.workers);
  const fs::path out = a.out.empty() ? fs::path(cfg.output_dir) : fs::path(a.out);
  for (const auto& p : emit_report(result.cells, out)) std::printf("wrote %s\n", p.c_str());
  if (const auto n = result.failure_count(); n > 0) {
    std::fprintf(stderr, "%zu of %zu cells reported problems:\n%s", n, result.cells.size(),
                 result.failure_summary().c_str());
  }
}

struct ReportArgs {
  std::string input;
  std::string out;
};

void run_report(const ReportArgs& a) {
  const auto cells = read_metrics_csv(a.input);
  const fs::path out = a.out.empty() ? fs::path(a.input).parent_path() : fs::path(a.out);
  for (const auto& p : emit_report(cells, out)) std::printf("wrote %s\n", p.c_str());
}

}  // namespace
}  // namespace finfold

int main(int argc, char** argv) {
  using namespace finfold;
  CLI::App app{"Reduced-order robotic tuna simulator with erectable median fins"};
  app.require_subcommand(1);

  SimulateArgs sim;
  auto* simulate = app.add_subcommand("simulate", "Simulate a run and write marker CSV");
  simulate->add_option("-c,--config", sim.config, "Experiment config (JSON)");
  simulate->add_option("-f,--frequency", sim.frequency, "Tail-beat frequency (Hz)");
  simulate->add_option("-a,--amplitude", sim.amplitude, "Servo amplitude (deg)");
  simulate->add_option("-b,--bias", sim.bias, "Turn bias (deg); non-zero gives a turn");
  simulate->add_option("--fin", sim.fin, "erected or folded")->check(CLI::IsMember({"erected", "folded"}));
  simulate->add_option("--schedule", sim.schedule, "Named fin schedule from the config");
  simulate->add_option("-d,--duration", sim.duration, "Duration (s)");
  simulate->add_option("--dt", sim.dt, "Time step (s)");
  simulate->add_option("--markers", sim.markers, "Markers along the midline");
  simulate->add_option("-o,--out", sim.out, "Output CSV");

  AnalyzeArgs an;
  auto* analyze = app.add_subcommand("analyze", "Fit a tracked-marker CSV");
  analyze->add_option("-c,--config", an.config, "Experiment config (JSON)");
  analyze->add_option("-i,--input", an.input, "Marker CSV (t,marker_id,x,y)")->required();
  analyze->add_option("-m,--marker", an.marker, "Marker id to analyse");
  analyze->add_option("--mode", an.mode, "straight or turn");

  MetricsArgs me;
  auto* metrics = app.add_subcommand("metrics", "Swimming metrics for one gait");
  metrics->add_option("-c,--config", me.config, "Experiment config (JSON)");
  metrics->add_option("-f,--frequency", me.frequency, "Tail-beat frequency (Hz)");
  metrics->add_option("-a,--amplitude", me.amplitude, "Servo amplitude (deg)");
  metrics->add_option("--fin", me.fin, "erected or folded")->check(CLI::IsMember({"erected", "folded"}));
  metrics->add_option("-b,--turn-bias", me.turn_bias, "Also fit a turn at this bias (deg)");
  metrics->add_option("--power", me.power, "Direct mode: mean power (W)");
  metrics->add_option("--speed", me.speed, "Direct mode: mean speed (m/s)");
  metrics->add_option("--mass", me.mass, "Direct mode: mass (kg)");
  metrics->add_option("--tail-amplitude", me.tail_amplitude, "Direct mode: peak-to-peak (m)");
  metrics->add_option("--length", me.length, "Direct mode: body length (m)");

  CalibrateArgs ca;
  auto* calibrate = app.add_subcommand("calibrate", "Fit model coefficients to targets");
  calibrate->add_option("-c,--config", ca.config, "Experiment config (JSON)");
  calibrate->add_option("-s,--seed", ca.seed, "Seed (overrides FINFOLD_SEED and config)");
  calibrate->add_option("-o,--out", ca.out, "Calibration file to write");
  calibrate->add_option("--restarts", ca.restarts, "Nelder-Mead restarts")->check(CLI::PositiveNumber);
  calibrate->add_option("--max-evals", ca.max_evaluations, "Evaluations per restart")->check(CLI::PositiveNumber);
  calibrate->add_option("-j,--workers", ca.workers, "Threads");
  calibrate->add_option("--free", ca.free, "Parameters to fit (default: the reduced free set)")
      ->delimiter(',');

  ValidateArgs va;
  auto* validate = app.add_subcommand("validate", "Check erect-vs-fold orderings");
  validate->add_option("-c,--config", va.config, "Experiment config (JSON)");
  validate->add_option("-j,--workers", va.workers, "Threads");

  SweepArgs sw;
  auto* sweep = app.add_subcommand("sweep", "Frequency sweep with report");
  sweep->add_option("-c,--config", sw.config, "Experiment config (JSON)");
  sweep->add_option("-o,--out", sw.out, "Output directory (default: config output_dir)");
  sweep->add_option("-j,--workers", sw.workers, "Threads");

  ReportArgs re;
  auto* report = app.add_subcommand("report", "Regenerate charts from metrics.csv");
  report->add_option("-i,--input", re.input, "metrics.csv")->required();
  report->add_option("-o,--out", re.out, "Output directory (default: input's directory)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::string msg = e.what();
    for (char& c : msg) {
      if (c == '\n') c = ' ';
    }
    std::fprintf(stderr, "%s: %s\n", std::string(error_kind_name(ErrorKind::kArgument)).c_str(),
                 msg.c_str());
    return 2;
  }

  try {
    if (*simulate) run_simulate(sim);
    else if (*analyze) run_analyze(an);
    else if (*metrics) run_metrics(me);
    else if (*calibrate) run_calibrate(ca);
    else if (*validate) run_validate(va);
    else if (*sweep) run_sweep_cmd(sw);
    else if (*report) run_report(re);
  } catch (const Error& e) {
    std::string msg = e.what();
    for (char& c : msg) {
      if (c == '\n') c = ' ';
    }
    std::fprintf(stderr, "%s: %s\n", std::string(error_kind_name(e.kind())).c_str(), msg.c_str());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "internal_error: %s\n", e.what());
    return 1;
  }
  return 0;
}
