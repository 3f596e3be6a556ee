#include "finfold/nelder_mead.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "finfold/error.hpp"

namespace finfold {

double reflect_into_bounds(double x, double lower, double upper) {
  const double width = upper - lower;
  if (!(width > 0.0)) return lower;
  if (!std::isfinite(x)) return lower + 0.5 * width;
  double offset = std::fmod(x - lower, 2.0 * width);
  if (offset < 0.0) offset += 2.0 * width;
  return offset <= width ? lower + offset : upper - (offset - width);
}

NelderMeadResult nelder_mead(const Objective& objective, std::vector<double> start,
                             std::span<const double> lower, std::span<const double> upper,
                             const NelderMeadOptions& options) {
  const std::size_t n = start.size();
  if (n == 0 || lower.size() != n || upper.size() != n) {
    throw Error(ErrorKind::kArgument, "nelder_mead: dimension mismatch");
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!(upper[i] > lower[i])) throw Error(ErrorKind::kArgument, "nelder_mead: empty bounds");
    start[i] = reflect_into_bounds(start[i], lower[i], upper[i]);
  }

  int evaluations = 0;
  auto eval = [&](std::vector<double>& x) {
    for (std::size_t i = 0; i < n; ++i) x[i] = reflect_into_bounds(x[i], lower[i], upper[i]);
    ++evaluations;
    const double v = objective(x);
    return std::isfinite(v) ? v : std::numeric_limits<double>::infinity();
  };

  const double dim = static_cast<double>(n);
  const double alpha = 1.0;
  const double gamma = 1.0 + 2.0 / dim;
  const double rho = 0.75 - 1.0 / (2.0 * dim);
  const double sigma = 1.0 - 1.0 / dim;

  std::vector<std::vector<double>> simplex(n + 1, start);
  std::vector<double> values(n + 1);
  values[0] = eval(simplex[0]);
  const double start_value = values[0];
  for (std::size_t i = 0; i < n; ++i) {
    auto& v = simplex[i + 1];
    const double step = options.initial_step * (upper[i] - lower[i]);
    // Step toward the interior so the vertex is not reflected onto another.
    v[i] += (v[i] + step <= upper[i]) ? step : -step;
    values[i + 1] = eval(v);
  }

  std::vector<std::size_t> order(n + 1);
  std::vector<double> centroid(n);
  std::vector<double> trial(n);
  std::vector<double> trial2(n);

  auto point_along = [&](double t, std::vector<double>& out, const std::vector<double>& worst) {
    for (std::size_t j = 0; j < n; ++j) out[j] = centroid[j] + t * (worst[j] - centroid[j]);
  };

  while (evaluations < options.max_evaluations) {
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    const std::size_t best = order.front();
    const std::size_t worst = order.back();
    const std::size_t second_worst = order[n - 1];

    double x_spread = 0.0;
    for (std::size_t i = 0; i <= n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        x_spread = std::max(x_spread, std::abs(simplex[i][j] - simplex[best][j]) /
                                          (upper[j] - lower[j]));
      }
    }
    if (std::isfinite(values[worst]) &&
        values[worst] - values[best] <= options.f_tolerance && x_spread <= options.x_tolerance) {
      break;
    }
    if (values[best] == 0.0 && values[worst] == 0.0) break;
    if (values[best] <= options.f_goal) break;

    std::fill(centroid.begin(), centroid.end(), 0.0);
    for (std::size_t i = 0; i <= n; ++i) {
      if (i == worst) continue;
      for (std::size_t j = 0; j < n; ++j) centroid[j] += simplex[i][j] / dim;
    }

    point_along(-alpha, trial, simplex[worst]);
    const double reflected = eval(trial);

    if (reflected < values[best]) {
      point_along(-alpha * gamma, trial2, simplex[worst]);
      const double expanded = eval(trial2);
      if (expanded < reflected) {
        simplex[worst] = trial2;
        values[worst] = expanded;
      } else {
        simplex[worst] = trial;
        values[worst] = reflected;
      }
      continue;
    }
    if (reflected < values[second_worst]) {
      simplex[worst] = trial;
      values[worst] = reflected;
      continue;
    }
    // Outside or inside contraction.
    const bool outside = reflected < values[worst];
    point_along(outside ? -alpha * rho : rho, trial2, simplex[worst]);
    const double contracted = eval(trial2);
    if (contracted < std::min(reflected, values[worst])) {
      simplex[worst] = trial2;
      values[worst] = contracted;
      continue;
    }
    if (outside) {
      simplex[worst] = trial;
      values[worst] = reflected;
      continue;
    }
    for (std::size_t i = 0; i <= n; ++i) {
      if (i == best) continue;
      for (std::size_t j = 0; j < n; ++j) {
        simplex[i][j] = simplex[best][j] + sigma * (simplex[i][j] - simplex[best][j]);
      }
      values[i] = eval(simplex[i]);
    }
  }

  const auto best = static_cast<std::size_t>(
      std::min_element(values.begin(), values.end()) - values.begin());
  return {simplex[best], values[best], start_value, evaluations};
}

}  // namespace finfold
