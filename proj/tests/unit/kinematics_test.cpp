#include <gtest/gtest.h>

#include <cmath>

#include "finfold/error.hpp"
#include "finfold/kinematics.hpp"

namespace finfold {
namespace {

MidlineParams quadratic(double a2) { return {0.0, 0.0, a2, 0.57, 1.0, 0.57}; }

void expect_kind(ErrorKind kind, const auto& fn) {
  try {
    fn();
    FAIL() << "expected " << error_kind_name(kind);
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), kind) << e.what();
  }
}

TEST(LateralDisplacement, ZeroEnvelopeIsFlat) {
  const MidlineParams p = quadratic(0.0);
  for (double x : {0.0, 0.1, 0.3, 0.57}) {
    for (double t : {0.0, 0.13, 0.9, 7.0}) EXPECT_EQ(lateral_displacement(p, x, t), 0.0);
  }
}

TEST(LateralDisplacement, TailTipClosedForm) {
  // A(L) = 0.1 * 0.57^2; the phase at x = L = lambda, t = T/4 is 2 pi - pi/2.
  EXPECT_NEAR(lateral_displacement(quadratic(0.1), 0.57, 0.25), -0.03249, 1e-12);
}

TEST(LateralDisplacement, PeriodicInTime) {
  const MidlineParams p{0.004, -0.02, 0.3, 0.8, 0.45, 0.57};
  for (int i = 0; i <= 20; ++i) {
    const double x = 0.57 * i / 20.0;
    for (double t : {0.0, 0.071, 0.33, 1.9, 12.25}) {
      const double h = lateral_displacement(p, x, t);
      EXPECT_LE(std::abs(lateral_displacement(p, x, t + p.period) - h),
                1e-12 * std::max(1.0, std::abs(h)));
    }
  }
}

TEST(LateralDisplacement, BoundedByEnvelope) {
  const MidlineParams p{0.01, -0.05, 0.2, 0.7, 0.8, 0.57};
  for (int i = 0; i <= 57; ++i) {
    const double x = p.body_length * i / 57.0;
    for (int k = 0; k < 40; ++k) {
      EXPECT_LE(std::abs(lateral_displacement(p, x, 0.02 * k)),
                std::abs(amplitude_envelope(p, x)) + 1e-15);
    }
  }
}

TEST(LateralDisplacement, ZeroCrossingsAdvanceByHalfWavelength) {
  // Constant envelope: h = a0 sin(k x - w t) vanishes at x = (w t + n pi) / k.
  const MidlineParams p{0.01, 0.0, 0.0, 0.2, 1.0, 0.57};
  const double t = 0.1;
  std::vector<double> zeros;
  const int n = 57000;
  for (int i = 0; i < n; ++i) {
    const double x0 = 0.57 * i / n;
    const double x1 = 0.57 * (i + 1) / n;
    const double h0 = lateral_displacement(p, x0, t);
    const double h1 = lateral_displacement(p, x1, t);
    if (h0 == 0.0 || (h0 < 0.0) != (h1 < 0.0)) zeros.push_back(x0 - h0 * (x1 - x0) / (h1 - h0));
  }
  ASSERT_GE(zeros.size(), 3u);
  for (std::size_t i = 1; i < zeros.size(); ++i) {
    EXPECT_NEAR(zeros[i] - zeros[i - 1], 0.1, 1e-6);
  }
}

TEST(LateralDisplacement, OutsideBodyIsDomainError) {
  expect_kind(ErrorKind::kDomain, [] { lateral_displacement(quadratic(0.1), -1e-9, 0.0); });
  expect_kind(ErrorKind::kDomain, [] { lateral_displacement(quadratic(0.1), 0.5701, 0.0); });
  expect_kind(ErrorKind::kDomain, [] { amplitude_envelope(quadratic(0.1), 0.6); });
}

TEST(AmplitudeEnvelope, Examples) {
  EXPECT_DOUBLE_EQ(amplitude_envelope({0.01, 0.0, 0.0, 0.57, 1.0, 0.57}, 0.3), 0.01);
  EXPECT_NEAR(amplitude_envelope(quadratic(0.1), 0.57), 0.03249, 1e-15);
  EXPECT_DOUBLE_EQ(amplitude_envelope({0.01, -0.05, 0.2, 0.57, 1.0, 0.57}, 0.0), 0.01);
}

TEST(AmplitudeEnvelope, SlopeMatchesFiniteDifference) {
  const MidlineParams p{0.01, -0.05, 0.2, 0.57, 1.0, 0.57};
  const double x = 0.31;
  const double h = 1e-6;
  const double fd = (amplitude_envelope(p, x + h) - amplitude_envelope(p, x - h)) / (2 * h);
  EXPECT_NEAR(envelope_slope(p, x), fd, 1e-9);
}

TEST(SampleMidline, EndpointsForTwoPoints) {
  const MidlineParams p{0.01, -0.05, 0.2, 0.7, 0.8, 0.57};
  const auto pts = sample_midline(p, 0.37, 2);
  ASSERT_EQ(pts.size(), 2u);
  EXPECT_EQ(pts[0].x, 0.0);
  EXPECT_EQ(pts[1].x, 0.57);
  EXPECT_EQ(pts[0].h, lateral_displacement(p, 0.0, 0.37));
  EXPECT_EQ(pts[1].h, lateral_displacement(p, 0.57, 0.37));
}

TEST(SampleMidline, ZeroEnvelopeTenPoints) {
  const auto pts = sample_midline(quadratic(0.0), 1.0);
  ASSERT_EQ(pts.size(), 10u);
  for (const auto& p : pts) EXPECT_EQ(p.h, 0.0);
}

TEST(SampleMidline, AgreesWithPointwiseEvaluation) {
  const auto pts = sample_midline(quadratic(0.1), 0.25, 10);
  EXPECT_NEAR(pts.back().h, -0.03249, 1e-12);
  for (const auto& p : pts) EXPECT_EQ(p.h, lateral_displacement(quadratic(0.1), p.x, 0.25));
}

TEST(SampleMidline, RejectsFewerThanTwoPoints) {
  expect_kind(ErrorKind::kArgument, [] { sample_midline(quadratic(0.1), 0.0, 1); });
}

TEST(PeakToPeak, Examples) {
  EXPECT_EQ(peak_to_peak_amplitude(quadratic(0.0)), 0.0);
  EXPECT_NEAR(peak_to_peak_amplitude(quadratic(0.1)), 0.06498, 1e-15);
  const MidlineParams p{0.004, 0.01, 0.15, 0.7, 1.0, 0.57};
  EXPECT_DOUBLE_EQ(peak_to_peak_amplitude(scale_envelope(p, 2.0)), 2.0 * peak_to_peak_amplitude(p));
}

TEST(MidlineParams, Validation) {
  expect_kind(ErrorKind::kValidation, [] { MidlineParams{0, 0, 0.1, 0.57, 0.0, 0.57}.validate(); });
  expect_kind(ErrorKind::kValidation, [] { MidlineParams{0, 0, 0.1, -1.0, 1.0, 0.57}.validate(); });
  expect_kind(ErrorKind::kValidation, [] { MidlineParams{0, 0, 0.1, 0.57, 1.0, 0.0}.validate(); });
  // Envelope reaching half a body length.
  expect_kind(ErrorKind::kValidation, [] { MidlineParams{0.3, 0, 0, 0.57, 1.0, 0.57}.validate(); });
  EXPECT_NO_THROW(quadratic(0.1).validate());
}

}  // namespace
}  // namespace finfold
