#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "finfold/error.hpp"
#include "finfold/dynamics.hpp"
#include "oracles.hpp"

namespace finfold {
namespace {

ErrorKind kind_of(const auto& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error raised";
  return ErrorKind::kPrecondition;
}

TEST(FinSchedule, ConstantAndSwitchBoundary) {
  EXPECT_EQ(fin_state_at(FinSchedule::constant(FinState::kErected), 123.0), FinState::kErected);
  const FinSchedule s({{0.0, FinState::kErected}, {2.0, FinState::kFolded}});
  EXPECT_EQ(fin_state_at(s, 1.999), FinState::kErected);
  EXPECT_EQ(fin_state_at(s, 2.0), FinState::kFolded);
  EXPECT_EQ(fin_state_at(FinSchedule::constant(FinState::kFolded), 10.0), FinState::kFolded);
}

TEST(FinSchedule, NegativeTimeAndBadEntries) {
  EXPECT_EQ(kind_of([] { fin_state_at(FinSchedule::constant(FinState::kFolded), -0.1); }),
            ErrorKind::kDomain);
  EXPECT_THROW(FinSchedule({{0.5, FinState::kFolded}}), Error);
  EXPECT_THROW(FinSchedule({{0.0, FinState::kFolded}, {0.0, FinState::kErected}}), Error);
}

TEST(InputPower, CaudalLaw) {
  const PowerModel pm;
  const FinSchedule sched = FinSchedule::constant(FinState::kFolded);
  EXPECT_NEAR(input_power(pm, {1e-6, 20, 0}, sched, 0.0).caudal, pm.p0, 1e-12);
  const double p1 = input_power(pm, {1.3, 20, 0}, sched, 0.0).caudal - pm.p0;
  const double p2 = input_power(pm, {2.6, 20, 0}, sched, 0.0).caudal - pm.p0;
  EXPECT_NEAR(p2 / p1, 8.0, 1e-12);
  // Amplitude enters squared relative to 20 degrees.
  const double half = input_power(pm, {2.6, 10, 0}, sched, 0.0).caudal - pm.p0;
  EXPECT_NEAR(half / p2, 0.25, 1e-12);
}

TEST(InputPower, DorsalStandbyAndFoldAction) {
  const PowerModel pm;
  const FinSchedule sched = FinSchedule::fold_after(3.0);
  const Gait g{2.0, 20, 0};
  EXPECT_EQ(input_power(pm, g, sched, 0.0).dorsal, pm.p_standby);
  EXPECT_EQ(input_power(pm, g, sched, 2.9).dorsal, pm.p_standby);
  EXPECT_EQ(input_power(pm, g, sched, 10.0).dorsal, pm.p_standby);
  // The action draws e_fold in total.
  double energy = 0.0;
  const double dt = 1e-4;
  for (double t = 0.0; t < 6.0; t += dt) {
    energy += (input_power(pm, g, sched, t).dorsal - pm.p_standby) * dt;
  }
  EXPECT_NEAR(energy, pm.e_fold, 1e-3);
}

TEST(SimulateStraight, ZeroEnvelopeStaysAtRest) {
  SwimmerModel m;
  m.midline.a2 = 0.0;
  const Trajectory tr = simulate_straight(m, {2.0, 20, 0}, FinSchedule::constant(FinState::kFolded), 5.0);
  for (const auto& s : tr.samples) {
    EXPECT_EQ(s.x, 0.0);
    EXPECT_EQ(s.speed, 0.0);
  }
}

TEST(SimulateStraight, ConvergesToBisectionFixedPoint) {
  const SwimmerModel m;
  for (FinState fin : {FinState::kErected, FinState::kFolded}) {
    for (double f : {1.0, 2.0, 3.0}) {
      const Gait g{f, 20, 0};
      const Trajectory tr = simulate_straight(m, g, FinSchedule::constant(fin), 30.0);
      const double u_star = oracle::terminal_speed(m, g, fin);
      EXPECT_NEAR(tr.samples.back().speed, u_star, 0.005 * u_star) << f;
      EXPECT_LT(u_star, m.midline.wavelength * f);
      // Monotone from rest, so x is convex.
      for (std::size_t i = 1; i < tr.size(); ++i) {
        ASSERT_GE(tr.samples[i].speed, tr.samples[i - 1].speed);
      }
    }
  }
}

TEST(SimulateStraight, StepHalvingConverges) {
  const SwimmerModel m;
  const Gait g{2.5, 20, 0};
  const auto sched = FinSchedule::constant(FinState::kErected);
  const double x1 = simulate_straight(m, g, sched, 20.0, 0.004).samples.back().x;
  const double x2 = simulate_straight(m, g, sched, 20.0, 0.002).samples.back().x;
  EXPECT_LT(std::abs(x1 - x2), 1e-6 * std::abs(x2));
}

TEST(SimulateStraight, ErectedSlowerAtSteadyState) {
  const SwimmerModel m;
  for (double f : {1.0, 2.0, 3.0}) {
    const Gait g{f, 20, 0};
    const double ue =
        simulate_straight(m, g, FinSchedule::constant(FinState::kErected), 30.0).samples.back().speed;
    const double uf =
        simulate_straight(m, g, FinSchedule::constant(FinState::kFolded), 30.0).samples.back().speed;
    EXPECT_LT(ue, uf);
  }
}

TEST(SimulateStraight, FoldAfterAccelerationMatchesFoldedSpeed) {
  const SwimmerModel m;
  const Gait g{2.6, 20, 0};
  const double folded =
      simulate_straight(m, g, FinSchedule::constant(FinState::kFolded), 40.0).samples.back().speed;
  const double policy =
      simulate_straight(m, g, FinSchedule::fold_after(6.0), 40.0).samples.back().speed;
  EXPECT_NEAR(policy, folded, 0.005 * folded);
}

TEST(SimulateStraight, BitIdenticalRepeats) {
  const SwimmerModel m;
  const Gait g{2.2, 17, 0};
  const auto a = simulate_straight(m, g, FinSchedule::fold_after(4.0), 10.0);
  const auto b = simulate_straight(m, g, FinSchedule::fold_after(4.0), 10.0);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a.samples[i].x, b.samples[i].x);
    EXPECT_EQ(a.samples[i].speed, b.samples[i].speed);
    EXPECT_EQ(a.samples[i].power(), b.samples[i].power());
  }
}

TEST(SimulateStraight, StepGuardAndDivergence) {
  const SwimmerModel m;
  EXPECT_EQ(kind_of([&] {
              simulate_straight(m, {2, 20, 0}, FinSchedule::constant(FinState::kFolded), 1.0, 0.011);
            }),
            ErrorKind::kArgument);
  // Drag stiff enough to make explicit RK4 unstable at the largest step.
  SwimmerModel stiff = m;
  stiff.robot.drag_coefficient = 1e5;
  stiff.robot.wetted_area_erected = 1e3;
  stiff.midline.a2 = 0.5;
  EXPECT_EQ(kind_of([&] {
              simulate_straight(stiff, {3, 20, 0}, FinSchedule::constant(FinState::kErected), 5.0,
                                0.01);
            }),
            ErrorKind::kNumericalDivergence);
}

TEST(SimulateTurn, BiasSignMirrorsPath) {
  const SwimmerModel m;
  const auto left = simulate_turn(m, {2.0, 20, 30}, FinState::kErected, 15.0);
  const auto right = simulate_turn(m, {2.0, 20, -30}, FinState::kErected, 15.0);
  ASSERT_EQ(left.size(), right.size());
  for (std::size_t i = 0; i < left.size(); i += 37) {
    EXPECT_EQ(left.samples[i].x, right.samples[i].x);
    EXPECT_EQ(left.samples[i].y, -right.samples[i].y);
    EXPECT_EQ(left.samples[i].heading, -right.samples[i].heading);
  }
}

TEST(SimulateTurn, SteadyTurnSatisfiesKinematicIdentity) {
  const SwimmerModel m;
  for (FinState fin : {FinState::kErected, FinState::kFolded}) {
    const auto tr = simulate_turn(m, {2.5, 20, 30}, fin, 40.0);
    const auto& a = tr.samples[tr.size() - 1001];
    const auto& b = tr.samples.back();
    const double omega = (b.heading - a.heading) / (b.t - a.t);
    // Radius from the chord geometry: curvature of the path over the last 2 s.
    const double chord = std::hypot(b.x - a.x, b.y - a.y);
    const double dpsi = b.heading - a.heading;
    const double radius = chord / (2.0 * std::sin(0.5 * std::abs(dpsi)));
    EXPECT_NEAR(radius * std::abs(omega), b.speed, 0.01 * b.speed);
  }
}

TEST(SimulateTurn, ErectedTurnsFasterAndTighter) {
  const SwimmerModel m;
  for (double f : {1.5, 2.0, 2.5, 3.0}) {
    double omega[2];
    double radius[2];
    for (FinState fin : {FinState::kErected, FinState::kFolded}) {
      const auto tr = simulate_turn(m, {f, 20, 30}, fin, 40.0);
      const auto& b = tr.samples.back();
      const double r = b.speed / std::abs(tr.samples.back().heading - tr.samples[tr.size() - 2].heading) * tr.dt;
      omega[fin == FinState::kErected] = b.speed / r;
      radius[fin == FinState::kErected] = r;
    }
    EXPECT_GT(omega[1], omega[0]) << f;
    EXPECT_LT(radius[1], radius[0]) << f;
  }
}

TEST(SimulateTurn, NeedsBias) {
  EXPECT_EQ(kind_of([] { simulate_turn(SwimmerModel{}, {2, 20, 0}, FinState::kFolded, 5.0); }),
            ErrorKind::kArgument);
}

TEST(GaitMidline, ScalesEnvelopeWithAmplitude) {
  const SwimmerModel m;
  const MidlineParams ref = gait_midline(m, {2.0, 20, 0});
  const MidlineParams half = gait_midline(m, {2.0, 10, 0});
  EXPECT_DOUBLE_EQ(ref.period, 0.5);
  EXPECT_DOUBLE_EQ(peak_to_peak_amplitude(half), 0.5 * peak_to_peak_amplitude(ref));
}

}  // namespace
}  // namespace finfold
