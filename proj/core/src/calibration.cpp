#include "finfold/calibration.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>
#include <utility>

#include "finfold/error.hpp"
#include "finfold/parallel.hpp"

namespace finfold {
namespace {

constexpr double kInfinity = std::numeric_limits<double>::infinity();

struct DefaultBounds {
  const char* name;
  double lower;
  double upper;
  // Searched unless the caller says otherwise. The rest are either pinned
  // only by band targets or degenerate with a free one (Cd with S_folded).
  bool free;
};

constexpr DefaultBounds kDefaultBounds[] = {
    {"envelope_a2", 0.02, 0.6, true},
    {"wavelength", 0.3, 2.0, false},
    {"drag_coefficient", 0.005, 0.1, true},
    {"wetted_area_folded", 0.05, 0.2, false},
    {"wetted_area_delta", 0.001, 0.1, true},
    {"tail_span", 0.08, 0.20, false},
    {"added_mass_factor", 1.0, 1.6, true},
    {"fin_lift_area", 0.005, 0.2, true},
    {"turn_gain", 0.02, 1.0, false},
    {"yaw_damping_folded", 0.02, 2.0, false},
    {"yaw_damping_erected", 0.02, 2.0, false},
    {"p0", 0.2, 3.0, false},
    {"p1", 0.005, 0.5, false},
    {"p_standby", 0.05, 1.0, false},
    {"thrust_gain_erected", 1.0, 1.6, true},
};

double read_parameter(const SwimmerModel& m, std::string_view name) {
  const RobotParams& r = m.robot;
  if (name == "envelope_a2") return m.midline.a2;
  if (name == "wavelength") return m.midline.wavelength;
  if (name == "drag_coefficient") return r.drag_coefficient;
  if (name == "wetted_area_folded") return r.wetted_area_folded;
  if (name == "wetted_area_delta") return r.wetted_area_erected - r.wetted_area_folded;
  if (name == "tail_span") return r.tail_span;
  if (name == "added_mass_factor") return r.added_mass_factor;
  if (name == "fin_lift_area") return r.fin_lift_slope * r.fin_area;
  if (name == "turn_gain") return r.turn_gain;
  if (name == "yaw_damping_folded") return r.yaw_damping_folded;
  if (name == "yaw_damping_erected") return r.yaw_damping_erected;
  if (name == "p0") return m.power.p0;
  if (name == "p1") return m.power.p1;
  if (name == "p_standby") return m.power.p_standby;
  if (name == "thrust_gain_erected") return r.thrust_gain_erected;
  throw Error(ErrorKind::kValidation, "unknown parameter '" + std::string(name) + "'");
}

void write_parameter(SwimmerModel& m, std::string_view name, double v) {
  RobotParams& r = m.robot;
  if (name == "envelope_a2") m.midline.a2 = v;
  else if (name == "wavelength") m.midline.wavelength = v;
  else if (name == "drag_coefficient") r.drag_coefficient = v;
  else if (name == "wetted_area_folded") r.wetted_area_folded = v;
  else if (name == "wetted_area_delta") r.wetted_area_erected = v;  // resolved below
  else if (name == "tail_span") r.tail_span = v;
  else if (name == "added_mass_factor") r.added_mass_factor = v;
  else if (name == "fin_lift_area") r.fin_area = v / r.fin_lift_slope;
  else if (name == "turn_gain") r.turn_gain = v;
  else if (name == "yaw_damping_folded") r.yaw_damping_folded = v;
  else if (name == "yaw_damping_erected") r.yaw_damping_erected = v;
  else if (name == "p0") m.power.p0 = v;
  else if (name == "p1") m.power.p1 = v;
  else if (name == "p_standby") m.power.p_standby = v;
  else if (name == "thrust_gain_erected") r.thrust_gain_erected = v;
  else throw Error(ErrorKind::kValidation, "unknown parameter '" + std::string(name) + "'");
}

double uniform01(std::mt19937_64& engine) {
  return static_cast<double>(engine() >> 11) * 0x1.0p-53;
}

std::string format_percent(double fraction) {
  std::ostringstream os;
  os.precision(4);
  os << fraction * 100.0 << "%";
  return os.str();
}

}  // namespace

// --- FreeParameters ----------------------------------------------------------

FreeParameters::FreeParameters(std::vector<ParameterSpec> specs) : specs_(std::move(specs)) {
  validate();
}

const std::vector<std::string>& FreeParameters::names() {
  static const std::vector<std::string> all = [] {
    std::vector<std::string> out;
    for (const auto& b : kDefaultBounds) out.emplace_back(b.name);
    return out;
  }();
  return all;
}

FreeParameters FreeParameters::from_model(const SwimmerModel& model) {
  std::vector<ParameterSpec> specs;
  for (const auto& b : kDefaultBounds) {
    const double v = read_parameter(model, b.name);
    specs.push_back({b.name, std::clamp(v, b.lower, b.upper), b.lower, b.upper, b.free});
  }
  FreeParameters out;
  out.specs_ = std::move(specs);
  return out;
}

const ParameterSpec& FreeParameters::spec(std::string_view name) const {
  for (const auto& s : specs_) {
    if (s.name == name) return s;
  }
  throw Error(ErrorKind::kValidation, "unknown parameter '" + std::string(name) + "'");
}

ParameterSpec& FreeParameters::mutable_spec(std::string_view name) {
  return const_cast<ParameterSpec&>(std::as_const(*this).spec(name));
}

void FreeParameters::set_value(std::string_view name, double value) {
  mutable_spec(name).value = value;
}

void FreeParameters::set_bounds(std::string_view name, double lower, double upper) {
  auto& s = mutable_spec(name);
  s.lower = lower;
  s.upper = upper;
}

void FreeParameters::set_free(std::string_view name, bool free) { mutable_spec(name).free = free; }

void FreeParameters::free_only(const std::vector<std::string>& names) {
  for (auto& s : specs_) s.free = false;
  for (const auto& n : names) mutable_spec(n).free = true;
}

std::size_t FreeParameters::free_count() const {
  return static_cast<std::size_t>(
      std::count_if(specs_.begin(), specs_.end(), [](const auto& s) { return s.free; }));
}

void FreeParameters::validate() const {
  for (const auto& s : specs_) {
    (void)read_parameter(SwimmerModel{}, s.name);
    if (!(s.upper > s.lower)) {
      throw Error(ErrorKind::kValidation, s.name + ": bounds must satisfy lower < upper");
    }
    if (!(s.value >= s.lower && s.value <= s.upper)) {
      throw Error(ErrorKind::kValidation, s.name + ": value outside its bounds");
    }
  }
}

SwimmerModel FreeParameters::apply(SwimmerModel base) const {
  std::optional<double> delta;
  for (const auto& s : specs_) {
    if (s.name == "wetted_area_delta") {
      delta = s.value;
    } else {
      write_parameter(base, s.name, s.value);
    }
  }
  if (delta) base.robot.wetted_area_erected = base.robot.wetted_area_folded + *delta;
  return base;
}

// --- targets -----------------------------------------------------------------

std::string_view to_string(Observable observable) noexcept {
  switch (observable) {
    case Observable::kFoldedSpeed: return "folded_speed";
    case Observable::kErectedAcceleration: return "erected_acceleration";
    case Observable::kAccelerationGain: return "acceleration_gain";
    case Observable::kSpeedDecrease: return "speed_decrease";
    case Observable::kCotIncrease: return "cot_increase";
    case Observable::kTurnRateGain: return "turn_rate_gain";
    case Observable::kTurnRadiusReduction: return "turn_radius_reduction";
    case Observable::kFoldPolicyCotPenalty: return "fold_policy_cot_penalty";
  }
  return "unknown";
}

Observable parse_observable(std::string_view text) {
  for (Observable o : {Observable::kFoldedSpeed, Observable::kErectedAcceleration,
                       Observable::kAccelerationGain, Observable::kSpeedDecrease,
                       Observable::kCotIncrease, Observable::kTurnRateGain,
                       Observable::kTurnRadiusReduction, Observable::kFoldPolicyCotPenalty}) {
    if (to_string(o) == text) return o;
  }
  throw Error(ErrorKind::kParse, "unknown observable '" + std::string(text) + "'");
}

double CalibrationTarget::excess(double simulated) const {
  if (simulated < lower) return simulated - lower;
  if (simulated > upper) return simulated - upper;
  return 0.0;
}

double CalibrationTarget::relative_error(double simulated) const {
  const double e = excess(simulated);
  if (e == 0.0) return 0.0;
  double scale = std::abs(e < 0.0 ? lower : upper);
  if (!(scale > 1e-9) || !std::isfinite(scale)) {
    const double other = std::abs(e < 0.0 ? upper : lower);
    scale = (std::isfinite(other) && other > 1e-9) ? other : 1.0;
  }
  return e / scale;
}

void CalibrationTargets::validate() const {
  if (targets.empty()) throw Error(ErrorKind::kValidation, "no calibration targets");
  for (const auto& t : targets) {
    if (!(t.weight >= 0.0) || !std::isfinite(t.weight)) {
      throw Error(ErrorKind::kValidation, t.name + ": weight must be non-negative");
    }
    if (!(t.tolerance > 0.0)) {
      throw Error(ErrorKind::kValidation, t.name + ": tolerance must be positive");
    }
    if (!(t.lower <= t.upper)) {
      throw Error(ErrorKind::kValidation, t.name + ": lower must not exceed upper");
    }
  }
}

CalibrationTargets CalibrationTargets::defaults() {
  return {{
      {"folded_speed_2p6hz", Observable::kFoldedSpeed, 0.338, 0.338, 1.0, 0.338 * 0.02, true},
      {"erected_accel_3hz", Observable::kErectedAcceleration, 0.1302, 0.1302, 1.0,
       0.1302 * 0.02, true},
      {"accel_gain_3hz", Observable::kAccelerationGain, 0.157, 0.157, 1.0, 0.03, true},
      {"speed_decrease", Observable::kSpeedDecrease, 0.03431, 0.16595, 1.0, 0.01, false},
      {"turn_rate_gain", Observable::kTurnRateGain, 0.3278, 0.3278, 1.0, 0.05, false},
      {"turn_radius_reduction", Observable::kTurnRadiusReduction, 0.3313, 0.3313, 1.0, 0.05,
       false},
      {"cot_increase", Observable::kCotIncrease, 0.0, 0.1347, 1.0, 0.02, false},
      {"fold_policy_cot_penalty", Observable::kFoldPolicyCotPenalty, -kInfinity, 0.0502, 1.0,
       0.01, false},
  }};
}

// --- observables ---------------------------------------------------------------

namespace {

class RunCache {
 public:
  RunCache(const SwimmerModel& model, const ObservableSettings& settings)
      : model_(model), settings_(settings) {}

  const StraightRun& straight(double f, FinState fin) {
    auto key = std::make_pair(f, fin);
    auto it = straight_.find(key);
    if (it == straight_.end()) {
      it = straight_
               .emplace(key, run_straight(model_, straight_gait(f), FinSchedule::constant(fin),
                                          settings_.experiment))
               .first;
    }
    return it->second;
  }

  const TurnFit& turn(double f, FinState fin) {
    auto key = std::make_pair(f, fin);
    auto it = turns_.find(key);
    if (it == turns_.end()) {
      Gait g = straight_gait(f);
      g.turn_bias_deg = settings_.turn_bias_deg;
      it = turns_.emplace(key, run_turn(model_, g, fin, settings_.experiment).fit).first;
    }
    return it->second;
  }

  Gait straight_gait(double f) const { return {f, settings_.amplitude_deg, 0.0}; }

 private:
  const SwimmerModel& model_;
  const ObservableSettings& settings_;
  std::map<std::pair<double, FinState>, StraightRun> straight_;
  std::map<std::pair<double, FinState>, TurnFit> turns_;
};

}  // namespace

ObservableValues evaluate_observables(const SwimmerModel& model,
                                      const ObservableSettings& settings,
                                      const std::vector<Observable>& requested) {
  model.validate();
  RunCache cache(model, settings);
  ObservableValues out;
  constexpr FinState kE = FinState::kErected;
  constexpr FinState kF = FinState::kFolded;

  for (Observable o : requested) {
    if (out.count(o)) continue;
    double value = 0.0;
    switch (o) {
      case Observable::kFoldedSpeed:
        value = cache.straight(settings.speed_frequency, kF).steady_speed;
        break;
      case Observable::kErectedAcceleration:
        value = cache.straight(settings.accel_frequency, kE).accel.acceleration;
        break;
      case Observable::kAccelerationGain:
        value = cache.straight(settings.accel_frequency, kE).accel.acceleration /
                    cache.straight(settings.accel_frequency, kF).accel.acceleration -
                1.0;
        break;
      case Observable::kSpeedDecrease:
        value = 1.0 - cache.straight(settings.speed_frequency, kE).steady_speed /
                          cache.straight(settings.speed_frequency, kF).steady_speed;
        break;
      case Observable::kCotIncrease: {
        const double f = settings.speed_frequency;
        const Gait g = cache.straight_gait(f);
        value = straight_metrics(model, g, kE, cache.straight(f, kE)).cot_total /
                    straight_metrics(model, g, kF, cache.straight(f, kF)).cot_total -
                1.0;
        break;
      }
      case Observable::kTurnRateGain:
      case Observable::kTurnRadiusReduction: {
        double rate = 0.0;
        double radius = 0.0;
        for (double f : settings.turn_frequencies) {
          const TurnFit& e = cache.turn(f, kE);
          const TurnFit& fo = cache.turn(f, kF);
          rate += std::abs(e.angular_speed) / std::abs(fo.angular_speed) - 1.0;
          radius += 1.0 - e.radius / fo.radius;
        }
        const auto n = static_cast<double>(settings.turn_frequencies.size());
        out[Observable::kTurnRateGain] = rate / n;
        out[Observable::kTurnRadiusReduction] = radius / n;
        continue;
      }
      case Observable::kFoldPolicyCotPenalty: {
        const double f = settings.policy_frequency;
        const double fold_time = cache.straight(f, kE).accel_end;
        const StraightRun policy = run_straight(model, cache.straight_gait(f),
                                                FinSchedule::fold_after(fold_time),
                                                settings.experiment);
        value = run_cost_of_transport(model, policy) /
                    run_cost_of_transport(model, cache.straight(f, kF)) -
                1.0;
        break;
      }
    }
    out[o] = value;
  }
  return out;
}

namespace {

std::vector<Observable> weighted_observables(const CalibrationTargets& targets) {
  std::vector<Observable> out;
  for (const auto& t : targets.targets) {
    if (t.weight > 0.0) out.push_back(t.observable);
  }
  return out;
}

double objective_from_values(const CalibrationTargets& targets, const ObservableValues& values) {
  double sum = 0.0;
  for (const auto& t : targets.targets) {
    if (t.weight == 0.0) continue;
    const double e = t.relative_error(values.at(t.observable));
    sum += t.weight * e * e;
  }
  return std::isfinite(sum) ? sum : kInfinity;
}

}  // namespace

double calibration_objective(const SwimmerModel& base, const FreeParameters& params,
                             const CalibrationTargets& targets,
                             const ObservableSettings& settings) {
  try {
    const SwimmerModel model = params.apply(base);
    return objective_from_values(
        targets, evaluate_observables(model, settings, weighted_observables(targets)));
  } catch (const Error&) {
    return kInfinity;
  }
}

std::vector<TargetResidual> target_residuals(const SwimmerModel& model,
                                             const CalibrationTargets& targets,
                                             const ObservableSettings& settings) {
  std::vector<Observable> all;
  for (const auto& t : targets.targets) all.push_back(t.observable);
  const ObservableValues values = evaluate_observables(model, settings, all);
  std::vector<TargetResidual> out;
  for (const auto& t : targets.targets) {
    const double sim = values.at(t.observable);
    out.push_back({t.name, t.observable, sim, t.lower, t.upper, t.relative_error(sim),
                   std::abs(t.excess(sim)) <= t.tolerance, t.hard});
  }
  return out;
}

CalibrationResult calibrate_model(const SwimmerModel& base, const CalibrationTargets& targets,
                                  const FreeParameters& params, std::uint64_t seed,
                                  const CalibrationOptions& options) {
  targets.validate();
  params.validate();
  if (options.restarts < 1) throw Error(ErrorKind::kArgument, "restarts must be >= 1");
  if (options.max_evaluations < 1) {
    throw Error(ErrorKind::kArgument, "max_evaluations must be >= 1");
  }

  std::vector<std::size_t> free_index;
  std::vector<double> lower;
  std::vector<double> upper;
  for (std::size_t i = 0; i < params.specs().size(); ++i) {
    const auto& s = params.specs()[i];
    if (!s.free) continue;
    free_index.push_back(i);
    lower.push_back(s.lower);
    upper.push_back(s.upper);
  }
  if (free_index.empty()) throw Error(ErrorKind::kArgument, "no free parameters to calibrate");

  auto to_params = [&](std::span<const double> x) {
    FreeParameters p = params;
    for (std::size_t k = 0; k < free_index.size(); ++k) {
      p.set_value(p.specs()[free_index[k]].name, x[k]);
    }
    return p;
  };
  const Objective objective = [&](std::span<const double> x) {
    return calibration_objective(base, to_params(x), targets, options.observables);
  };

  // Start points are drawn up front so they do not depend on scheduling.
  std::vector<std::vector<double>> starts;
  for (int r = 0; r < options.restarts; ++r) {
    std::vector<double> x;
    if (r == 0) {
      for (std::size_t i : free_index) x.push_back(params.specs()[i].value);
    } else {
      std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                        static_cast<std::uint32_t>(r)};
      std::mt19937_64 engine(seq);
      for (std::size_t k = 0; k < free_index.size(); ++k) {
        x.push_back(lower[k] + uniform01(engine) * (upper[k] - lower[k]));
      }
    }
    starts.push_back(std::move(x));
  }

  std::vector<NelderMeadResult> finals(starts.size());
  parallel_for(starts.size(), options.workers, [&](std::size_t r) {
    NelderMeadOptions nm;
    nm.max_evaluations = options.max_evaluations;
    nm.f_tolerance = 1e-13;
    nm.x_tolerance = 1e-7;
    nm.f_goal = options.objective_goal;
    NelderMeadResult best = nelder_mead(objective, starts[r], lower, upper, nm);
    int used = best.evaluations;
    // Re-seed the simplex around the incumbent while budget remains; a
    // collapsed simplex often stalls short of the minimum.
    while (used < options.max_evaluations && std::isfinite(best.value) &&
           best.value > std::max(options.objective_goal, 1e-14)) {
      nm.max_evaluations = options.max_evaluations - used;
      nm.initial_step = 0.02;
      NelderMeadResult next = nelder_mead(objective, best.x, lower, upper, nm);
      used += next.evaluations;
      if (!(next.value < best.value * (1.0 - 1e-6))) {
        if (next.value < best.value) best.x = next.x, best.value = next.value;
        break;
      }
      best.x = next.x;
      best.value = next.value;
    }
    best.evaluations = used;
    finals[r] = std::move(best);
  });

  CalibrationResult result;
  result.seed = seed;
  std::size_t best_index = 0;
  for (std::size_t r = 0; r < finals.size(); ++r) {
    result.restarts.push_back(
        {starts[r], finals[r].start_value, finals[r].value, finals[r].evaluations});
    if (finals[r].value < finals[best_index].value) best_index = r;
  }
  if (!std::isfinite(finals[best_index].value)) {
    throw Error(ErrorKind::kCalibrationFailure,
                "objective is non-finite from every start point");
  }

  result.parameters = to_params(finals[best_index].x);
  result.objective = finals[best_index].value;
  result.residuals =
      target_residuals(result.parameters.apply(base), targets, options.observables);
  result.passed = true;
  for (std::size_t i = 0; i < result.residuals.size(); ++i) {
    const auto& r = result.residuals[i];
    if (r.hard && targets.targets[i].weight > 0.0 && !r.within_tolerance) result.passed = false;
  }
  return result;
}

// --- validation ----------------------------------------------------------------

std::vector<double> frequency_grid(double f_min, double f_max, double f_step) {
  if (!(f_min > 0.0) || !(f_max >= f_min) || !(f_step > 0.0)) {
    throw Error(ErrorKind::kValidation, "frequency range must satisfy 0 < f_min <= f_max, step > 0");
  }
  std::vector<double> out;
  const auto count = static_cast<long long>(std::floor((f_max - f_min) / f_step + 1e-9));
  for (long long i = 0; i <= count; ++i) {
    out.push_back(std::round((f_min + static_cast<double>(i) * f_step) * 1e9) / 1e9);
  }
  return out;
}

bool ValidationReport::all_passed() const {
  return std::all_of(assertions.begin(), assertions.end(),
                     [](const Assertion& a) { return a.passed; });
}

const Assertion* ValidationReport::find(std::string_view name) const {
  for (const auto& a : assertions) {
    if (a.name == name) return &a;
  }
  return nullptr;
}

ValidationReport validate_model(const SwimmerModel& model, const ValidationOptions& options) {
  model.validate();
  options.experiment.validate();
  const std::vector<double> grid = frequency_grid(options.f_min, options.f_max, options.f_step);

  ValidationReport report;
  report.rows.resize(grid.size());
  parallel_for(grid.size(), options.workers, [&](std::size_t i) {
    ValidationRow& row = report.rows[i];
    row.frequency = grid[i];
    try {
      const Gait gait{grid[i], options.amplitude_deg, 0.0};
      const auto& exp = options.experiment;
      const StraightRun erected =
          run_straight(model, gait, FinSchedule::constant(FinState::kErected), exp);
      const StraightRun folded =
          run_straight(model, gait, FinSchedule::constant(FinState::kFolded), exp);
      row.erected = straight_metrics(model, gait, FinState::kErected, erected);
      row.folded = straight_metrics(model, gait, FinState::kFolded, folded);

      Gait turning = gait;
      turning.turn_bias_deg = options.turn_bias_deg;
      row.turn_erected = run_turn(model, turning, FinState::kErected, exp).fit;
      row.turn_folded = run_turn(model, turning, FinState::kFolded, exp).fit;

      const StraightRun policy =
          run_straight(model, gait, FinSchedule::fold_after(erected.accel_end), exp);
      row.fold_policy_cot = run_cost_of_transport(model, policy);
      row.folded_run_cot = run_cost_of_transport(model, folded);
      row.fold_policy_final_speed = policy.final_speed;
      row.folded_final_speed = folded.final_speed;
    } catch (const Error& e) {
      row.error = std::string(error_kind_name(e.kind())) + ": " + e.what();
    }
  });

  auto ordered = [&](const ValidationRow& r) {
    return r.frequency >= options.ordering_min_frequency - 1e-9;
  };
  auto add = [&](std::string name, bool passed, std::string detail) {
    report.assertions.push_back({std::move(name), passed, std::move(detail)});
  };
  auto at = [](double f) {
    std::ostringstream os;
    os << " at " << f << " Hz";
    return os.str();
  };

  {
    std::string failed;
    for (const auto& r : report.rows) {
      if (!r.error.empty()) failed += at(r.frequency) + " (" + r.error + ")";
    }
    add("runs_completed", failed.empty(), failed.empty() ? "all runs completed" : "failed" + failed);
  }

  std::vector<const ValidationRow*> rows;
  std::vector<const ValidationRow*> ordering_rows;
  for (const auto& r : report.rows) {
    if (!r.error.empty()) continue;
    rows.push_back(&r);
    if (ordered(r)) ordering_rows.push_back(&r);
  }

  {
    double worst = 1.0;
    double worst_f = 0.0;
    for (const auto* r : rows) {
      for (double r2 : {r->erected.r_squared, r->folded.r_squared}) {
        if (r2 < worst) worst = r2, worst_f = r->frequency;
      }
    }
    std::ostringstream os;
    os << "min R^2 = " << worst << (rows.empty() ? "" : at(worst_f));
    add("r_squared_gate", !rows.empty() && worst > options.r_squared_gate, os.str());
  }

  auto ordering = [&](const std::string& name, auto predicate, const char* what) {
    std::string failed;
    for (const auto* r : ordering_rows) {
      if (!predicate(*r)) failed += at(r->frequency);
    }
    add(name, !ordering_rows.empty() && failed.empty(),
        failed.empty() ? std::string(what) : std::string("violated") + failed);
  };

  ordering("accel_erected_ge_folded",
           [](const ValidationRow& r) { return r.erected.acceleration >= r.folded.acceleration; },
           "erected acceleration >= folded at every f");
  ordering("speed_erected_lt_folded",
           [](const ValidationRow& r) { return r.erected.mean_speed < r.folded.mean_speed; },
           "erected speed < folded at every f");
  ordering("cot_erected_gt_folded",
           [](const ValidationRow& r) { return r.erected.cot_total > r.folded.cot_total; },
           "erected COT > folded at every f");
  ordering("turn_rate_erected_gt_folded",
           [](const ValidationRow& r) {
             return std::abs(r.turn_erected.angular_speed) > std::abs(r.turn_folded.angular_speed);
           },
           "erected turn rate > folded at every f");
  ordering("turn_radius_erected_lt_folded",
           [](const ValidationRow& r) { return r.turn_erected.radius < r.turn_folded.radius; },
           "erected turn radius < folded at every f");

  {
    double lo = kInfinity;
    double hi = -kInfinity;
    for (const auto* r : ordering_rows) {
      const double d = 1.0 - r->erected.mean_speed / r->folded.mean_speed;
      lo = std::min(lo, d);
      hi = std::max(hi, d);
    }
    add("speed_decrease_band",
        !ordering_rows.empty() && lo >= options.speed_decrease_low &&
            hi <= options.speed_decrease_high,
        "decrease spans " + format_percent(lo) + " .. " + format_percent(hi));
  }
  {
    double worst = -kInfinity;
    for (const auto* r : ordering_rows) {
      worst = std::max(worst, r->erected.cot_total / r->folded.cot_total - 1.0);
    }
    add("cot_increase_cap", !ordering_rows.empty() && worst <= options.cot_increase_cap,
        "max COT increase " + format_percent(worst));
  }
  {
    double rate = 0.0;
    double radius = 0.0;
    for (const auto* r : ordering_rows) {
      rate += std::abs(r->turn_erected.angular_speed) / std::abs(r->turn_folded.angular_speed) - 1.0;
      radius += 1.0 - r->turn_erected.radius / r->turn_folded.radius;
    }
    const double n = static_cast<double>(std::max<std::size_t>(1, ordering_rows.size()));
    report.mean_turn_rate_gain = rate / n;
    report.mean_turn_radius_reduction = radius / n;
    add("turn_rate_gain_aggregate",
        !ordering_rows.empty() &&
            std::abs(report.mean_turn_rate_gain - options.turn_rate_gain) <=
                options.turn_delta_tolerance,
        "mean turn-rate gain " + format_percent(report.mean_turn_rate_gain));
    add("turn_radius_reduction_aggregate",
        !ordering_rows.empty() &&
            std::abs(report.mean_turn_radius_reduction - options.turn_radius_reduction) <=
                options.turn_delta_tolerance,
        "mean turn-radius reduction " + format_percent(report.mean_turn_radius_reduction));
  }
  {
    double worst_cot = -kInfinity;
    double worst_speed = 0.0;
    for (const auto* r : rows) {
      worst_cot = std::max(worst_cot, r->fold_policy_cot / r->folded_run_cot - 1.0);
      worst_speed = std::max(worst_speed,
                             std::abs(r->fold_policy_final_speed / r->folded_final_speed - 1.0));
    }
    add("fold_policy_cot", !rows.empty() && worst_cot <= options.fold_policy_cot_cap,
        "max whole-run COT penalty " + format_percent(worst_cot));
    add("fold_policy_final_speed",
        !rows.empty() && worst_speed <= options.fold_policy_speed_tolerance,
        "max final-speed mismatch " + format_percent(worst_speed));
  }
  return report;
}

}  // namespace finfold
