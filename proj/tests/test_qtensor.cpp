#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "ldg/qtensor.hpp"
#include "support.hpp"

using namespace ldg;
using ldg::testing::index_sum_tr3;
using ldg::testing::random_q;
using ldg::testing::random_rotation;
using ldg::testing::random_unit;

TEST(QTensor, MatrixIsSymmetricTracelessAndNormMatches) {
  std::mt19937_64 rng(11);
  for (int k = 0; k < 1000; ++k) {
    const QTensor q = random_q(rng);
    const Mat3 m = q.matrix();
    EXPECT_NEAR(m[0][0] + m[1][1] + m[2][2], 0.0, 1e-15);
    double ff = 0.0;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        EXPECT_EQ(m[i][j], m[j][i]);
        ff += m[i][j] * m[i][j];
      }
    EXPECT_NEAR(norm_sq(q), ff, 1e-12 * ff);
    EXPECT_EQ(tr_Q2(q), norm_sq(q));
    EXPECT_EQ(QTensor::from_matrix(m).coeffs().size(), 5u);
    for (int c = 0; c < 5; ++c) EXPECT_NEAR(QTensor::from_matrix(m)[c], q[c], 1e-14);
  }
}

TEST(QTensor, ZeroTensorInvariants) {
  const QTensor z;
  EXPECT_EQ(norm_sq(z), 0.0);
  EXPECT_EQ(tr_Q3(z), 0.0);
  EXPECT_EQ(biaxiality(z), 0.0);
  const EigenFrame f = eigen(z);
  for (double v : f.values) EXPECT_EQ(v, 0.0);
}

TEST(QTensor, FromUniaxialValues) {
  EXPECT_EQ(norm_sq(from_uniaxial(0.0, {0, 0, 1})), 0.0);
  const QTensor q = from_uniaxial(1.0, {0, 0, 1});
  EXPECT_NEAR(norm_sq(q), 1.0, 1e-15);
  EXPECT_NEAR(tr_Q3(q), 1.0 / std::sqrt(6.0), 1e-15);
  EXPECT_NEAR(tr_Q3(q), 0.408248290463863, 1e-14);
  const QTensor qx = from_uniaxial(1.0, {1, 0, 0});
  EXPECT_NEAR(norm_sq(qx), norm_sq(q), 1e-15);
  EXPECT_NEAR(tr_Q3(qx), tr_Q3(q), 1e-15);
  EXPECT_NEAR(norm(from_uniaxial(-0.3, {0, 1, 0})), 0.3, 1e-15);
}

TEST(QTensor, FromUniaxialRejectsNonUnitDirector) {
  EXPECT_THROW(from_uniaxial(1.0, {0, 0, 1.001}), PreconditionError);
  EXPECT_THROW(from_uniaxial(1.0, {0, 0, 0}), PreconditionError);
}

TEST(QTensor, TraceCubeMatchesIndexSumOracle) {
  std::mt19937_64 rng(12);
  for (int k = 0; k < 100000; ++k) {
    const QTensor q = random_q(rng);
    const double oracle = index_sum_tr3(q);
    EXPECT_NEAR(tr_Q3(q), oracle, 1e-12 * std::max(1.0, std::abs(oracle)));
  }
}

TEST(QTensor, EigenReconstructionAndResidual) {
  std::mt19937_64 rng(13);
  for (int k = 0; k < 100000; ++k) {
    const QTensor q = random_q(rng, k % 3 == 0 ? 1e-3 : 1.0);
    const EigenFrame f = eigen(q);
    const Mat3 m = q.matrix();
    const double scale = std::max(1.0, norm(q));
    EXPECT_GE(f.values[0], f.values[1]);
    EXPECT_GE(f.values[1], f.values[2]);
    EXPECT_NEAR(f.values[0] + f.values[1] + f.values[2], 0.0, 1e-12 * scale);
    Mat3 rec{};
    for (int e = 0; e < 3; ++e) {
      const Vec3& v = f.vectors[e];
      EXPECT_NEAR(norm(v), 1.0, 1e-12);
      const Vec3 mv = matvec(m, v);
      for (int i = 0; i < 3; ++i) EXPECT_NEAR(mv[i], f.values[e] * v[i], 1e-10 * scale);
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) rec[i][j] += f.values[e] * v[i] * v[j];
    }
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) ASSERT_NEAR(rec[i][j], m[i][j], 1e-10 * scale);
    EXPECT_NEAR(dot(f.vectors[0], f.vectors[1]), 0.0, 1e-10);
    EXPECT_NEAR(dot(f.vectors[0], f.vectors[2]), 0.0, 1e-10);
  }
}

TEST(QTensor, EigenOfUniaxialAndDegenerateSpectra) {
  const EigenFrame f = eigen(from_uniaxial(1.0, {0, 0, 1}));
  EXPECT_NEAR(f.values[0], std::sqrt(2.0 / 3.0), 1e-14);
  EXPECT_NEAR(f.values[1], -1.0 / std::sqrt(6.0), 1e-14);
  EXPECT_NEAR(f.values[2], -1.0 / std::sqrt(6.0), 1e-14);
  EXPECT_NEAR(std::abs(f.vectors[0][2]), 1.0, 1e-12);
  const EigenFrame g = eigen(from_uniaxial(-2.0, {1, 0, 0}));
  EXPECT_NEAR(g.values[2], -2.0 * std::sqrt(2.0 / 3.0), 1e-14);
  EXPECT_NEAR(std::abs(g.vectors[2][0]), 1.0, 1e-12);
}

TEST(QTensor, RotationInvariance) {
  std::mt19937_64 rng(14);
  for (int k = 0; k < 10000; ++k) {
    const QTensor q = random_q(rng);
    const QTensor r = rotate(q, random_rotation(rng));
    EXPECT_NEAR(norm_sq(r), norm_sq(q), 1e-12 * std::max(1.0, norm_sq(q)));
    EXPECT_NEAR(tr_Q3(r), tr_Q3(q), 1e-12 * std::max(1.0, std::pow(norm(q), 3)));
  }
}

TEST(QTensor, Biaxiality) {
  std::mt19937_64 rng(15);
  for (int k = 0; k < 10000; ++k) {
    std::uniform_real_distribution<double> s(-2.0, 2.0);
    EXPECT_NEAR(biaxiality(from_uniaxial(s(rng), random_unit(rng))), 0.0, 1e-10);
    const double b = biaxiality(random_q(rng));
    EXPECT_GE(b, 0.0);
    EXPECT_LE(b, 1.0);
  }
  EXPECT_NEAR(biaxiality(from_uniaxial(0.7, {0.6, 0.8, 0.0})), 0.0, 1e-12);
  EXPECT_NEAR(biaxiality(QTensor(QTensor::Coeffs{1, 0, 0, 0, 0})), 1.0, 1e-15);
}

TEST(QTensor, TracelessSquare) {
  std::mt19937_64 rng(16);
  const QTensor q = random_q(rng);
  const Mat3 m = q.matrix();
  const Mat3 m2 = matmul(m, m);
  const double tr = m2[0][0] + m2[1][1] + m2[2][2];
  EXPECT_NEAR(tr, norm_sq(q), 1e-12);
  const Mat3 p = traceless_square(q).matrix();
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) EXPECT_NEAR(p[i][j], m2[i][j] - (i == j ? tr / 3.0 : 0.0), 1e-12);
}
