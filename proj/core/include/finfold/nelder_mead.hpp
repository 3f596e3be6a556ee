#pragma once

#include <functional>
#include <limits>
#include <span>
#include <vector>

namespace finfold {

struct NelderMeadOptions {
  int max_evaluations = 2000;
  // Initial simplex edge as a fraction of each coordinate's range.
  double initial_step = 0.1;
  // Stop when the spread of simplex values falls below this.
  double f_tolerance = 1e-14;
  double x_tolerance = 1e-10;
  // Stop as soon as the best value reaches this.
  double f_goal = -std::numeric_limits<double>::infinity();
};

struct NelderMeadResult {
  std::vector<double> x;
  double value;
  double start_value;
  int evaluations;
};

using Objective = std::function<double(std::span<const double>)>;

// Maps x into [lower, upper] by mirroring at the faces.
double reflect_into_bounds(double x, double lower, double upper);

// Adaptive-coefficient Nelder-Mead (coefficients scaled with dimension) on
// a box. Trial points outside the box are reflected back inside; non-finite
// objective values are treated as +infinity. The returned value is never
// worse than the start value.
NelderMeadResult nelder_mead(const Objective& objective, std::vector<double> start,
                             std::span<const double> lower, std::span<const double> upper,
                             const NelderMeadOptions& options = {});

}  // namespace finfold
