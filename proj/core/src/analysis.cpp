#include "finfold/analysis.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "finfold/error.hpp"

namespace finfold {
namespace {

struct WindowSlice {
  std::vector<double> t;
  std::vector<double> x;
};

WindowSlice slice(const Trajectory& traj, TimeWindow window) {
  if (!(window.end > window.begin)) {
    throw Error(ErrorKind::kArgument, "time window must have end > begin");
  }
  const double slack = 1e-9 * std::max(1.0, std::abs(window.end));
  WindowSlice out;
  for (const auto& s : traj.samples) {
    if (s.t >= window.begin - slack && s.t <= window.end + slack) {
      out.t.push_back(s.t);
      out.x.push_back(s.x);
    }
  }
  return out;
}

void require_same_size(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    throw Error(ErrorKind::kArgument, "time and value series differ in length");
  }
}

}  // namespace

AccelFit fit_constant_acceleration(std::span<const double> t, std::span<const double> x) {
  require_same_size(t, x);
  if (t.size() < kMinFitSamples) {
    throw Error(ErrorKind::kArgument, "acceleration fit needs at least 10 samples");
  }
  const double t0 = t.front();
  const double x0 = x.front();

  double sum_xt2 = 0.0;
  double sum_t4 = 0.0;
  double mean_x = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    const double tau = t[i] - t0;
    const double tau2 = tau * tau;
    sum_xt2 += (x[i] - x0) * tau2;
    sum_t4 += tau2 * tau2;
    mean_x += x[i] - x0;
  }
  mean_x /= static_cast<double>(t.size());
  if (!(sum_t4 > 0.0)) throw Error(ErrorKind::kDegenerateData, "zero-length time window");
  const double half_a = sum_xt2 / sum_t4;

  double ss_res = 0.0;
  double ss_tot = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    const double tau = t[i] - t0;
    const double xi = x[i] - x0;
    const double r = xi - half_a * tau * tau;
    ss_res += r * r;
    ss_tot += (xi - mean_x) * (xi - mean_x);
  }
  if (!(ss_tot > 0.0)) {
    throw Error(ErrorKind::kDegenerateData, "displacement is constant; R^2 undefined");
  }
  return {2.0 * half_a, 1.0 - ss_res / ss_tot, {t0, t.back()}};
}

AccelFit fit_constant_acceleration(const Trajectory& traj, TimeWindow window) {
  const WindowSlice s = slice(traj, window);
  return fit_constant_acceleration(s.t, s.x);
}

double detect_phases(const Trajectory& traj, const PhaseDetectionOptions& options) {
  traj.validate();
  if (traj.duration() < 3.0 - 1e-9) {
    throw Error(ErrorKind::kArgument, "phase detection needs at least 3 s of data");
  }
  const auto& s = traj.samples;
  const auto lag = static_cast<std::size_t>(std::llround(options.window / traj.dt));
  const auto hold = static_cast<std::size_t>(std::llround(options.hold / traj.dt));
  if (lag == 0 || lag >= s.size()) {
    throw Error(ErrorKind::kArgument, "phase window does not fit the trajectory");
  }

  auto steady_at = [&](std::size_t i) {
    const double u = s[i].speed;
    return u > 0.0 && std::abs(u - s[i - lag].speed) < options.threshold * u;
  };

  // Length of the run of steady samples ending at i.
  std::size_t run = 0;
  for (std::size_t i = lag; i < s.size(); ++i) {
    run = steady_at(i) ? run + 1 : 0;
    if (run > hold) return s[i - hold].t;
  }
  throw Error(ErrorKind::kNoSteadyPhase, "speed never settles within the record");
}

double fit_steady_speed(std::span<const double> t, std::span<const double> x) {
  require_same_size(t, x);
  if (t.size() < kMinFitSamples) {
    throw Error(ErrorKind::kArgument, "steady-speed fit needs at least 10 samples");
  }
  const double n = static_cast<double>(t.size());
  const double mean_t = std::accumulate(t.begin(), t.end(), 0.0) / n;
  const double mean_x = std::accumulate(x.begin(), x.end(), 0.0) / n;
  double sxy = 0.0;
  double sxx = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    sxy += (t[i] - mean_t) * (x[i] - mean_x);
    sxx += (t[i] - mean_t) * (t[i] - mean_t);
  }
  if (!(sxx > 0.0)) throw Error(ErrorKind::kDegenerateData, "degenerate time window");
  return sxy / sxx;
}

double fit_steady_speed(const Trajectory& traj, TimeWindow window) {
  const WindowSlice s = slice(traj, window);
  return fit_steady_speed(s.t, s.x);
}

Circle fit_circle(std::span<const Point2> points) {
  if (points.size() < 3) {
    throw Error(ErrorKind::kCircleDegenerate, "circle fit needs at least 3 points");
  }
  // Center and scale for conditioning; the fit is translation invariant.
  double cx = 0.0;
  double cy = 0.0;
  for (const auto& p : points) {
    cx += p.x;
    cy += p.y;
  }
  cx /= static_cast<double>(points.size());
  cy /= static_cast<double>(points.size());
  double scale = 0.0;
  for (const auto& p : points) scale += (p.x - cx) * (p.x - cx) + (p.y - cy) * (p.y - cy);
  scale = std::sqrt(scale / static_cast<double>(points.size()));
  if (!(scale > 0.0)) throw Error(ErrorKind::kCircleDegenerate, "all points coincide");

  // Solve u^2 + v^2 + D u + E v + F = 0 in least squares.
  const auto n = static_cast<Eigen::Index>(points.size());
  Eigen::MatrixXd design(n, 3);
  Eigen::VectorXd rhs(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double u = (points[i].x - cx) / scale;
    const double v = (points[i].y - cy) / scale;
    design(i, 0) = u;
    design(i, 1) = v;
    design(i, 2) = 1.0;
    rhs(i) = -(u * u + v * v);
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
  qr.setThreshold(1e-10);
  if (qr.rank() < 3) {
    throw Error(ErrorKind::kCircleDegenerate, "points are collinear");
  }
  const Eigen::Vector3d sol = qr.solve(rhs);
  const double uc = -0.5 * sol(0);
  const double vc = -0.5 * sol(1);
  const double r2 = uc * uc + vc * vc - sol(2);
  if (!(r2 > 0.0) || !std::isfinite(r2)) {
    throw Error(ErrorKind::kCircleDegenerate, "circle fit produced no real radius");
  }

  Circle c{cx + uc * scale, cy + vc * scale, std::sqrt(r2) * scale, 0.0};
  double ss = 0.0;
  for (const auto& p : points) {
    const double d = std::hypot(p.x - c.center_x, p.y - c.center_y) - c.radius;
    ss += d * d;
  }
  c.residual_rms = std::sqrt(ss / static_cast<double>(points.size()));
  return c;
}

std::vector<double> unwrap_angles(std::span<const double> angles) {
  std::vector<double> out(angles.begin(), angles.end());
  for (std::size_t i = 1; i < out.size(); ++i) {
    double d = angles[i] - angles[i - 1];
    d -= 2.0 * kPi * std::floor((d + kPi) / (2.0 * kPi));
    out[i] = out[i - 1] + d;
  }
  return out;
}

TurnFit fit_turning(const Trajectory& traj) {
  if (traj.samples.empty()) throw Error(ErrorKind::kArgument, "empty trajectory");
  return fit_turning(traj, {traj.samples.front().t, traj.samples.back().t});
}

TurnFit fit_turning(const Trajectory& traj, TimeWindow window) {
  if (!(window.end > window.begin)) {
    throw Error(ErrorKind::kArgument, "time window must have end > begin");
  }
  const double slack = 1e-9 * std::max(1.0, std::abs(window.end));
  std::vector<Point2> points;
  std::vector<double> times;
  std::vector<double> headings;
  double speed_sum = 0.0;
  for (const auto& s : traj.samples) {
    if (s.t < window.begin - slack || s.t > window.end + slack) continue;
    points.push_back({s.x, s.y});
    times.push_back(s.t);
    headings.push_back(s.heading);
    speed_sum += s.speed;
  }
  if (points.size() < kMinTurnSamples) {
    throw Error(ErrorKind::kArgument, "turn fit needs at least 20 samples");
  }
  const std::vector<double> unwrapped = unwrap_angles(headings);
  const double turned = unwrapped.back() - unwrapped.front();
  if (!(std::abs(turned) >= kMinTurnAngle)) {
    throw Error(ErrorKind::kArgument, "turn fit needs at least 90 degrees of heading change");
  }

  const Circle c = fit_circle(points);
  TurnFit fit;
  fit.radius = c.radius;
  // Mean of the finite-difference heading rates telescopes to this.
  fit.angular_speed = turned / (times.back() - times.front());
  fit.center_x = c.center_x;
  fit.center_y = c.center_y;
  fit.residual_rms = c.residual_rms;
  fit.mean_path_speed = speed_sum / static_cast<double>(points.size());
  return fit;
}

double head_heave_amplitude(std::span<const double> lateral) {
  const std::size_t n = lateral.size();
  if (n < 8) throw Error(ErrorKind::kDegenerateData, "series too short for a heave estimate");

  // Remove a linear trend (path drift).
  std::vector<double> idx(n);
  std::iota(idx.begin(), idx.end(), 0.0);
  const double slope = fit_steady_speed(idx, lateral);
  const double mean_idx = 0.5 * static_cast<double>(n - 1);
  const double mean_val = std::accumulate(lateral.begin(), lateral.end(), 0.0) / static_cast<double>(n);
  std::vector<double> v(n);
  double var = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    v[i] = lateral[i] - (mean_val + slope * (static_cast<double>(i) - mean_idx));
    var += v[i] * v[i];
  }
  const double sigma = std::sqrt(var / static_cast<double>(n));
  if (!(sigma > 0.0)) throw Error(ErrorKind::kDegenerateData, "no oscillation detected");

  // Upward zero crossings, with hysteresis so noise cannot split a cycle.
  const double band = 0.25 * sigma;
  std::vector<double> crossings;
  bool armed = false;   // has dipped below -band since the last crossing
  bool pending = false; // a candidate crossing waits for +band confirmation
  double candidate = 0.0;
  for (std::size_t i = 1; i < n; ++i) {
    if (v[i] < -band) {
      armed = true;
      pending = false;
    }
    if (armed && v[i - 1] < 0.0 && v[i] >= 0.0) {
      candidate = static_cast<double>(i - 1) + v[i - 1] / (v[i - 1] - v[i]);
      pending = true;
    }
    if (pending && v[i] > band) {
      crossings.push_back(candidate);
      pending = false;
      armed = false;
    }
  }
  if (crossings.size() < 4) {
    throw Error(ErrorKind::kDegenerateData, "no oscillation detected (fewer than 3 cycles)");
  }

  double total = 0.0;
  std::size_t cycles = 0;
  for (std::size_t k = 0; k + 1 < crossings.size(); ++k) {
    const double start = crossings[k];
    const double period = crossings[k + 1] - start;
    const auto first = static_cast<std::size_t>(std::ceil(start));
    const auto last = static_cast<std::size_t>(std::floor(crossings[k + 1]));
    if (last < first + 3) continue;
    const auto m = static_cast<Eigen::Index>(last - first + 1);
    Eigen::MatrixXd design(m, 3);
    Eigen::VectorXd rhs(m);
    for (Eigen::Index j = 0; j < m; ++j) {
      const double i = static_cast<double>(first) + static_cast<double>(j);
      const double phase = 2.0 * kPi * (i - start) / period;
      design(j, 0) = std::cos(phase);
      design(j, 1) = std::sin(phase);
      design(j, 2) = 1.0;
      rhs(j) = v[first + static_cast<std::size_t>(j)];
    }
    const Eigen::Vector3d coef = design.colPivHouseholderQr().solve(rhs);
    total += 2.0 * std::hypot(coef(0), coef(1));
    ++cycles;
  }
  if (cycles < 3) {
    throw Error(ErrorKind::kDegenerateData, "no oscillation detected (cycles undersampled)");
  }
  return total / static_cast<double>(cycles);
}

}  // namespace finfold
