#pragma once

#include <vector>

namespace finfold {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr int kDefaultMarkerCount = 10;

// Small-amplitude traveling-wave midline
//
//   h(x, t) = A(x) sin(2 pi x / wavelength - 2 pi t / period)
//   A(x)    = a0 + a1 x + a2 x^2
//
// x is arclength along the straightened body, nose at 0 and tail tip at
// body_length. All lengths in meters, period in seconds.
struct MidlineParams {
  double a0 = 0.0;
  double a1 = 0.0;
  double a2 = 0.0;
  double wavelength = 0.57;
  double period = 1.0;
  double body_length = 0.57;

  // Throws ErrorKind::kValidation when a length/period is non-positive or
  // the envelope reaches half a body length anywhere on the body.
  void validate() const;

  double angular_frequency() const { return 2.0 * kPi / period; }
  double wavenumber() const { return 2.0 * kPi / wavelength; }

  bool operator==(const MidlineParams&) const = default;
};

double amplitude_envelope(const MidlineParams& p, double x);

// dA/dx at x.
double envelope_slope(const MidlineParams& p, double x);

double lateral_displacement(const MidlineParams& p, double x, double t);

struct MidlinePoint {
  double x;
  double h;
};

// n equidistant points from nose to tail, x_i = i L / (n - 1).
std::vector<MidlinePoint> sample_midline(const MidlineParams& p, double t,
                                         int n = kDefaultMarkerCount);

// Tail-tip excursion over one beat, 2 |A(L)|.
double peak_to_peak_amplitude(const MidlineParams& p);

// Multiplies a0, a1 and a2 by factor.
MidlineParams scale_envelope(const MidlineParams& p, double factor);

}  // namespace finfold
