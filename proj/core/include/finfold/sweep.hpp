#pragma once

#include <optional>
#include <string>
#include <vector>

#include "finfold/config.hpp"
#include "finfold/metrics.hpp"

namespace finfold {

// One (frequency, fin state) cell. `metrics` is empty when the straight run
// failed; `notes` then holds the error, or a turn failure when only the turn
// run failed.
struct SweepCell {
  double frequency = 0.0;
  FinState fin = FinState::kFolded;
  std::optional<SwimMetrics> metrics;
  std::string notes;
};

struct SweepResult {
  // Ordered by frequency, then by the configured fin-state order.
  std::vector<SweepCell> cells;

  std::size_t failure_count() const;
  // One line per failed cell; empty when everything ran.
  std::string failure_summary() const;
  const SweepCell* find(double frequency, FinState fin) const;
};

// Metrics for a single cell: constant-fin straight run, plus a biased turn
// when `with_turn` is set.
SweepCell run_sweep_cell(const SwimmerModel& model, const ExperimentSettings& settings,
                         const Gait& gait, FinState fin, bool with_turn);

// Simulates every (f, fin) pair of the config's sweep with the effective
// (calibrated, if configured) model. Cells are independent; `workers` > 1
// runs them concurrently with results identical to a sequential run.
SweepResult run_sweep(const ExperimentConfig& config, unsigned workers = 1);

}  // namespace finfold
