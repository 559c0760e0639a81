#pragma once

#include <cmath>
#include <random>

#include "ldg/qtensor.hpp"

namespace ldg::testing {

inline QTensor random_q(std::mt19937_64& rng, double scale = 1.0) {
  std::normal_distribution<double> n(0.0, scale);
  return QTensor(QTensor::Coeffs{n(rng), n(rng), n(rng), n(rng), n(rng)});
}

inline Vec3 random_unit(std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  Vec3 v{n(rng), n(rng), n(rng)};
  return (1.0 / norm(v)) * v;
}

// Rotation about a random axis (Rodrigues formula).
inline Mat3 random_rotation(std::mt19937_64& rng) {
  const Vec3 k = random_unit(rng);
  std::uniform_real_distribution<double> u(0.0, 2.0 * kPi);
  const double a = u(rng), c = std::cos(a), s = std::sin(a);
  Mat3 r{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) r[i][j] = (i == j ? c : 0.0) + (1.0 - c) * k[i] * k[j];
  r[0][1] -= s * k[2];
  r[0][2] += s * k[1];
  r[1][0] += s * k[2];
  r[1][2] -= s * k[0];
  r[2][0] -= s * k[1];
  r[2][1] += s * k[0];
  return r;
}

// Triple index sum Q_ij Q_jp Q_pi on the reconstructed matrix.
inline double index_sum_tr3(const QTensor& q) {
  const Mat3 m = q.matrix();
  double s = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int p = 0; p < 3; ++p) s += m[i][j] * m[j][p] * m[p][i];
  return s;
}

}  // namespace ldg::testing
