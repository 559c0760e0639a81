#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "ldg/fields.hpp"
#include "support.hpp"

using namespace ldg;
using ldg::testing::random_rotation;
using ldg::testing::random_unit;

namespace {

const RadialProfile& profile() {
  static const RadialProfile p = solve_profile(1e4, 20.0, 1000);
  return p;
}

const ReducedParams& params() {
  static const ReducedParams rp = reduced_from_temperature(1e4, 20.0);
  return rp;
}

}  // namespace

TEST(Fields, HarmonicMap) {
  const QTensor q = harmonic_map_field({0, 0, 2.5});
  const QTensor e = from_uniaxial(1.0, {0, 0, 1});
  for (int c = 0; c < 5; ++c) EXPECT_NEAR(q[c], e[c], 1e-15);
  EXPECT_THROW(harmonic_map_field({0, 0, 0}), SingularPointError);
  std::mt19937_64 rng(1);
  for (int k = 0; k < 1000; ++k) {
    const QTensor v = harmonic_map_field(3.0 * random_unit(rng));
    EXPECT_NEAR(norm(v), 1.0, 1e-12);
    EXPECT_NEAR(biaxiality(v), 0.0, 1e-12);
  }
}

TEST(Fields, HarmonicMapGradientSquared) {
  std::mt19937_64 rng(2);
  for (double r : {0.5, 2.0, 7.0}) {
    const Vec3 x = r * random_unit(rng);
    const auto g = fd_gradient(harmonic_map_field, x, 1e-3 * r);
    const double g2 = norm_sq(g[0]) + norm_sq(g[1]) + norm_sq(g[2]);
    EXPECT_NEAR(g2 / (6.0 / (r * r)), 1.0, 1e-4);
  }
}

TEST(Fields, Hedgehog) {
  const RadialProfile& p = profile();
  EXPECT_EQ(norm_sq(hedgehog_field(p, {0, 0, 0})), 0.0);
  EXPECT_NEAR(norm(hedgehog_field(p, {0, 0, 20.0})), far_field_value(1e4, 20.0), 1e-14);
  EXPECT_THROW(hedgehog_field(p, {0, 0, 20.5}), DomainError);
  const TensorField h = [&p](const Vec3& x) { return hedgehog_field(p, x); };
  for (double step : {1e-2, 1e-3}) {
    const auto g = fd_gradient(h, {0, 0, 0}, step);
    EXPECT_LT(std::sqrt(norm_sq(g[0]) + norm_sq(g[1]) + norm_sq(g[2])), 10.0 * step);
  }
}

TEST(Fields, HedgehogRotationEquivariance) {
  const RadialProfile& p = profile();
  std::mt19937_64 rng(3);
  for (int k = 0; k < 200; ++k) {
    const Mat3 T = random_rotation(rng);
    const Vec3 x = 9.0 * random_unit(rng);
    const QTensor a = hedgehog_field(p, matvec(T, x));
    const QTensor b = rotate(hedgehog_field(p, x), T);
    for (int c = 0; c < 5; ++c) EXPECT_NEAR(a[c], b[c], 1e-12);
  }
}

TEST(Fields, BiaxialPerturbation) {
  const RadialProfile& p = profile();
  const QTensor o = biaxial_perturbation_field(p, {0, 0, 0});
  EXPECT_NEAR(norm(o), std::sqrt(2.0 / 3.0) / 144.0, 1e-16);
  const Vec3 x{6.0, 0.0, 8.0};
  const QTensor d = biaxial_perturbation_field(p, x) - hedgehog_field(p, x);
  EXPECT_NEAR(norm(d), 0.0, 1e-15);
  EXPECT_NEAR(biaxiality(biaxial_perturbation_field(p, {0, 0, 0.5})), 0.0, 1e-12);
  EXPECT_GT(biaxiality(biaxial_perturbation_field(p, {0.5, 0.0, 0.3})), 1e-3);
  const Mat3 m = biaxial_perturbation_field(p, {0.3, -0.2, 0.4}).matrix();
  EXPECT_NEAR(m[0][0] + m[1][1] + m[2][2], 0.0, 1e-15);
  EXPECT_THROW(biaxial_perturbation_field(p, {0, 0, 21}), DomainError);
}

TEST(Fields, BoundaryConsistency) {
  const RadialProfile& p = profile();
  std::mt19937_64 rng(4);
  const double R = p.R;
  const double bound_h = std::abs(1.0 - p.h.back());
  const double bound_b = bound_h + std::abs(1.0 - R / 10.0) / ((R * R + 12.0) * (R * R + 12.0)) * std::sqrt(2.0 / 3.0);
  for (int k = 0; k < 100; ++k) {
    const Vec3 x = R * random_unit(rng);
    const QTensor qb = anchoring_datum(x);
    EXPECT_LE(norm(hedgehog_field(p, x) - qb), bound_h + 1e-14);
    EXPECT_LE(norm(biaxial_perturbation_field(p, x) - qb), bound_b + 1e-14);
  }
}

TEST(Fields, QuotientField) {
  const RadialProfile& p = profile();
  const TensorField h = [&p](const Vec3& x) { return hedgehog_field(p, x); };
  std::mt19937_64 rng(5);
  for (int k = 0; k < 200; ++k) {
    std::uniform_real_distribution<double> u(0.01, 19.0);
    const Vec3 x = u(rng) * random_unit(rng);
    EXPECT_NEAR(norm(divide_by_profile(h, p, x)), 1.0, 1e-10);
  }
  const TensorField s = [&p, h](const Vec3& x) { return divide_by_profile(h, p, x); };
  const Vec3 n = random_unit(rng);
  const double r = 3.0, d = 1e-4;
  const QTensor dr = (s((r + d) * n) - s((r - d) * n)) / (2.0 * d);
  EXPECT_LT(norm(dr), 1e-6);
  EXPECT_THROW(divide_by_profile(h, p, {0, 0, 1e-4}), SingularPointError);
}

TEST(Fields, HedgehogFluxIsTwelvePi) {
  const RadialProfile& p = profile();
  const TensorField h = [&p](const Vec3& x) { return hedgehog_field(p, x); };
  const TensorField s = [&p, h](const Vec3& x) { return divide_by_profile(h, p, x); };
  for (double delta : {0.05, 0.1, 1.0, 5.0, 10.0}) EXPECT_NEAR(flux_phi(s, p, params(), delta).flux, 12.0 * kPi, 1e-6);
  const TensorField hm = [](const Vec3& x) { return harmonic_map_field(x); };
  EXPECT_NEAR(flux_phi(hm, p, params(), 2.0).flux, 12.0 * kPi, 1e-6);
  EXPECT_THROW(flux_phi(s, p, params(), 1.0, 4), ConfigError);
  EXPECT_THROW(flux_phi(s, p, params(), 25.0), DomainError);
}

TEST(Fields, BallSampling) {
  const RadialProfile& p = profile();
  const BallField f = sample_perturbed_hedgehog(33, p);
  EXPECT_EQ(f.size(), 33u * 33u * 33u);
  EXPECT_DOUBLE_EQ(f.dx, 40.0 / 32.0);
  int interior = 0;
  for (int i = 0; i < f.n; ++i)
    for (int j = 0; j < f.n; ++j)
      for (int k = 0; k < f.n; ++k) {
        const std::size_t id = f.index(i, j, k);
        const Vec3 x = f.position(i, j, k);
        const double r = norm(x);
        if (r < f.R - 0.5 * f.dx) {
          ++interior;
          EXPECT_EQ(f.mask[id], NodeKind::interior);
        } else {
          EXPECT_NE(f.mask[id], NodeKind::interior);
          const QTensor qb = anchoring_datum(x);
          EXPECT_EQ(f.values[id], qb);
        }
      }
  EXPECT_GT(interior, 0);
  EXPECT_THROW(sample_hedgehog(15, p), ConfigError);
  const BallField hm = sample_harmonic_map(33, 20.0, 1e4);
  EXPECT_TRUE(hm.singular_core);
  EXPECT_EQ(norm_sq(hm.values[hm.index(16, 16, 16)]), 0.0);
  EXPECT_EQ(max_biaxiality(sample_hedgehog(33, p), 5.0) < 1e-10, true);
  EXPECT_GT(max_biaxiality(f, 5.0), 0.0);
}
