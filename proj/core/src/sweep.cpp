#include "finfold/sweep.hpp"

#include <algorithm>
#include <cmath>

#include "finfold/calibration.hpp"
#include "finfold/error.hpp"
#include "finfold/experiment.hpp"
#include "finfold/parallel.hpp"

namespace finfold {
namespace {

// Notes end up in a CSV field.
std::string note_text(std::string_view prefix, const Error& e) {
  std::string s = std::string(prefix) + std::string(error_kind_name(e.kind())) + ": " + e.what();
  std::replace(s.begin(), s.end(), ',', ';');
  std::replace(s.begin(), s.end(), '\n', ' ');
  return s;
}

}  // namespace

std::size_t SweepResult::failure_count() const {
  return static_cast<std::size_t>(std::count_if(
      cells.begin(), cells.end(), [](const SweepCell& c) { return !c.notes.empty(); }));
}

std::string SweepResult::failure_summary() const {
  std::string out;
  char buf[64];
  for (const auto& c : cells) {
    if (c.notes.empty()) continue;
    std::snprintf(buf, sizeof buf, "f=%g Hz %s: ", c.frequency, std::string(to_string(c.fin)).c_str());
    out += buf + c.notes + "\n";
  }
  return out;
}

const SweepCell* SweepResult::find(double frequency, FinState fin) const {
  for (const auto& c : cells) {
    if (c.fin == fin && std::abs(c.frequency - frequency) < 1e-9) return &c;
  }
  return nullptr;
}

SweepCell run_sweep_cell(const SwimmerModel& model, const ExperimentSettings& settings,
                         const Gait& gait, FinState fin, bool with_turn) {
  SweepCell cell;
  cell.frequency = gait.frequency;
  cell.fin = fin;
  const Gait straight{gait.frequency, gait.amplitude_deg, 0.0};
  try {
    const StraightRun run = run_straight(model, straight, FinSchedule::constant(fin), settings);
    cell.metrics = straight_metrics(model, straight, fin, run);
  } catch (const Error& e) {
    cell.notes = note_text("", e);
    return cell;
  }
  if (with_turn) {
    try {
      cell.metrics->turn = run_turn(model, gait, fin, settings).fit;
    } catch (const Error& e) {
      cell.notes = note_text("turn ", e);
    }
  }
  return cell;
}

SweepResult run_sweep(const ExperimentConfig& config, unsigned workers) {
  config.validate();
  const SwimmerModel model = effective_model(config);
  const auto& spec = config.sweep;
  const auto grid = frequency_grid(spec.f_min, spec.f_max, spec.f_step);

  SweepResult result;
  result.cells.resize(grid.size() * spec.fin_states.size());
  parallel_for(result.cells.size(), workers, [&](std::size_t i) {
    const double f = grid[i / spec.fin_states.size()];
    const FinState fin = spec.fin_states[i % spec.fin_states.size()];
    const Gait gait{f, spec.amplitude_deg, spec.include_turns ? spec.turn_bias_deg : 0.0};
    result.cells[i] = run_sweep_cell(model, config.simulation, gait, fin, spec.include_turns);
  });
  return result;
}

}  // namespace finfold
