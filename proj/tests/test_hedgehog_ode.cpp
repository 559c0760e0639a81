#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "ldg/hedgehog_ode.hpp"

using namespace ldg;

namespace {

const RadialProfile& solved(double t) {
  static const RadialProfile p2 = solve_profile(1e2, 50.0, 2000);
  static const RadialProfile p4 = solve_profile(1e4, 50.0, 2000);
  static const RadialProfile p6 = solve_profile(1e6, 50.0, 2000);
  return t < 1e3 ? p2 : (t < 1e5 ? p4 : p6);
}

}  // namespace

TEST(HedgehogOde, Preconditions) {
  EXPECT_THROW(solve_profile(1.0, 50.0, 2000), DomainError);
  EXPECT_THROW(solve_profile(100.0, 9.0, 2000), DomainError);
  EXPECT_THROW(solve_profile(100.0, 50.0, 199), DomainError);
}

TEST(HedgehogOde, InvariantsAtSeveralTemperatures) {
  for (double t : {1e2, 1e4, 1e6}) {
    const RadialProfile& p = solved(t);
    ASSERT_EQ(p.size(), 2000u);
    const ProfileBounds b = profile_bounds(p);
    EXPECT_LT(b.residual, 1e-8) << t;
    EXPECT_GE(b.min_increment, -1e-12) << t;
    EXPECT_GE(b.min_h, 0.0);
    EXPECT_LE(b.max_h, 1.0);
    EXPECT_GE(b.envelope_margin, 0.0);
    EXPECT_GE(b.core_margin, 0.0);
    EXPECT_GT(p.d2h0, 0.0);
    EXPECT_TRUE(b.pass());
    for (std::size_t i = 1; i < p.size(); ++i) EXPECT_GT(p.r[i], p.r[i - 1]);
    EXPECT_EQ(p.r.back(), 50.0);
  }
}

TEST(HedgehogOde, SmallRadiusMatchesCurvature) {
  for (double t : {1e2, 1e4, 1e6}) {
    const RadialProfile& p = solved(t);
    const double r1 = p.r[0];
    EXPECT_LT(std::abs(p.h[0] - 0.5 * p.d2h0 * r1 * r1) / p.h[0], 1e-3);
  }
}

TEST(HedgehogOde, FarFieldValue) {
  const RadialProfile& p = solved(1e2);
  EXPECT_GE(p.h.back(), 1.0 - 6.0 / (2.0 * 2500.0) - 1e-4);
  EXPECT_LE(p.h.back(), 1.0);
  EXPECT_EQ(p.h.back(), far_field_value(1e2, 50.0));
}

TEST(HedgehogOde, EnvelopeAtRadiusFive) {
  for (double t : {1e2, 1e6}) {
    const double h = interpolate_h(solved(t), 5.0).h;
    EXPECT_GE(h, 25.0 / 39.0);
    EXPECT_LE(h, 1.0);
  }
}

TEST(HedgehogOde, ResidualOfNonSolutions) {
  RadialProfile p = solved(1e2);
  for (std::size_t i = 0; i < p.size(); ++i) p.h[i] = p.r[i] * p.r[i] / (p.r[i] * p.r[i] + 14.0);
  EXPECT_GT(profile_residual(p), 0.01);
  RadialProfile q = solved(1e2);
  const double base = profile_residual(q);
  for (auto& h : q.h) h += 0.01;
  EXPECT_GT(profile_residual(q), base);
}

TEST(HedgehogOde, Interpolation) {
  const RadialProfile& p = solved(1e4);
  for (std::size_t i = 0; i < p.size(); i += 37) {
    const ProfileSample s = interpolate_h(p, p.r[i]);
    EXPECT_EQ(s.h, p.h[i]);
    EXPECT_EQ(s.dh, p.dh[i]);
  }
  const ProfileSample z = interpolate_h(p, 0.0);
  EXPECT_EQ(z.h, 0.0);
  EXPECT_EQ(z.dh, 0.0);
  for (std::size_t i = 0; i + 1 < p.size(); i += 13) {
    const double r = 0.5 * (p.r[i] + p.r[i + 1]);
    const double h = interpolate_h(p, r).h;
    EXPECT_GE(h, std::min(p.h[i], p.h[i + 1]) - 1e-6);
    EXPECT_LE(h, std::max(p.h[i], p.h[i + 1]) + 1e-6);
  }
  EXPECT_THROW(interpolate_h(p, -1e-3), DomainError);
  EXPECT_THROW(interpolate_h(p, 50.1), DomainError);
}

TEST(HedgehogOde, SecondOrderConvergence) {
  const RadialProfile a = solve_profile(1e2, 20.0, 400);
  const RadialProfile b = solve_profile(1e2, 20.0, 800);
  const RadialProfile c = solve_profile(1e2, 20.0, 1600);
  double e1 = 0.0, e2 = 0.0;
  for (double r = 0.05; r < 20.0; r += 0.05) {
    e1 = std::max(e1, std::abs(interpolate_h(a, r).h - interpolate_h(b, r).h));
    e2 = std::max(e2, std::abs(interpolate_h(b, r).h - interpolate_h(c, r).h));
  }
  EXPECT_GT(e1 / e2, 3.0);
  EXPECT_LT(e1 / e2, 5.0);
}

TEST(HedgehogOde, TemperatureLimitConsistency) {
  const RadialProfile a = solve_profile(1e4, 50.0, 2000);
  const RadialProfile b = solve_profile(1e8, 50.0, 2000);
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a.h[i] - b.h[i]));
  EXPECT_LT(m, 10.0 * h_plus_of(1e4) / 1e4);
}

TEST(HedgehogOde, NearLowerValidity) {
  const RadialProfile p = solve_profile(1.5, 50.0, 2000);
  const ProfileBounds b = profile_bounds(p);
  EXPECT_LT(b.residual, 1e-8);
  EXPECT_GE(b.min_increment, -1e-12);
}

TEST(HedgehogOde, DecayCheck) {
  const double d2 = decay_check(solved(1e2));
  const double d6 = decay_check(solved(1e6));
  EXPECT_LE(d2, 10.0);
  EXPECT_LE(d6, 10.0);
  EXPECT_LT(std::max(d2, d6) / std::min(d2, d6), 2.0);
  EXPECT_EQ(decay_check(constant_profile(1.0, 1e2, 50.0, 400)), 0.0);
  EXPECT_THROW(decay_check(solve_profile(1e2, 10.0, 400)), DomainError);
}
