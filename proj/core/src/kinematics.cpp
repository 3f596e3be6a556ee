#include "finfold/kinematics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "finfold/error.hpp"

namespace finfold {
namespace {

void check_on_body(const MidlineParams& p, double x) {
  if (!(x >= 0.0 && x <= p.body_length)) {
    throw Error(ErrorKind::kDomain,
                "x = " + std::to_string(x) + " outside body [0, " +
                    std::to_string(p.body_length) + "]");
  }
}

double envelope_unchecked(const MidlineParams& p, double x) {
  return p.a0 + (p.a1 + p.a2 * x) * x;
}

}  // namespace

void MidlineParams::validate() const {
  if (!(period > 0.0)) throw Error(ErrorKind::kValidation, "period must be positive");
  if (!(wavelength > 0.0)) throw Error(ErrorKind::kValidation, "wavelength must be positive");
  if (!(body_length > 0.0)) throw Error(ErrorKind::kValidation, "body_length must be positive");

  // |A| of a quadratic peaks at an endpoint or at the vertex.
  double peak = std::max(std::abs(envelope_unchecked(*this, 0.0)),
                         std::abs(envelope_unchecked(*this, body_length)));
  if (a2 != 0.0) {
    const double vertex = -a1 / (2.0 * a2);
    if (vertex > 0.0 && vertex < body_length) {
      peak = std::max(peak, std::abs(envelope_unchecked(*this, vertex)));
    }
  }
  if (!std::isfinite(peak) || !(peak < 0.5 * body_length)) {
    throw Error(ErrorKind::kValidation,
                "amplitude envelope must stay below half a body length");
  }
}

double amplitude_envelope(const MidlineParams& p, double x) {
  check_on_body(p, x);
  return envelope_unchecked(p, x);
}

double envelope_slope(const MidlineParams& p, double x) {
  check_on_body(p, x);
  return p.a1 + 2.0 * p.a2 * x;
}

double lateral_displacement(const MidlineParams& p, double x, double t) {
  const double envelope = amplitude_envelope(p, x);
  const double phase = 2.0 * kPi * (x / p.wavelength - t / p.period);
  return envelope * std::sin(phase);
}

std::vector<MidlinePoint> sample_midline(const MidlineParams& p, double t, int n) {
  if (n < 2) {
    throw Error(ErrorKind::kArgument, "sample_midline needs at least 2 points");
  }
  std::vector<MidlinePoint> points;
  points.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    // Pin the last point to L exactly so rounding cannot leave the body.
    const double x = (i == n - 1) ? p.body_length : i * p.body_length / (n - 1);
    points.push_back({x, lateral_displacement(p, x, t)});
  }
  return points;
}

double peak_to_peak_amplitude(const MidlineParams& p) {
  return 2.0 * std::abs(amplitude_envelope(p, p.body_length));
}

MidlineParams scale_envelope(const MidlineParams& p, double factor) {
  MidlineParams scaled = p;
  scaled.a0 *= factor;
  scaled.a1 *= factor;
  scaled.a2 *= factor;
  return scaled;
}

}  // namespace finfold
