#pragma once

// Symmetric traceless 3x3 tensors (the Q-tensor order parameter).
//
// A QTensor stores five coefficients in the orthonormal basis
//   E1 = (xx - yy)/sqrt2,  E2 = (2zz - xx - yy)/sqrt6,
//   E3 = (xy + yx)/sqrt2,  E4 = (xz + zx)/sqrt2,  E5 = (yz + zy)/sqrt2
// so that Q_ij Q_ij equals the Euclidean norm of the coefficient vector.

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <utility>

#include "ldg/error.hpp"

namespace ldg {

using Vec3 = std::array<double, 3>;
using Mat3 = std::array<std::array<double, 3>, 3>;

inline constexpr double kSqrt2 = std::numbers::sqrt2;
inline constexpr double kSqrt3 = std::numbers::sqrt3;
inline constexpr double kSqrt6 = kSqrt2 * kSqrt3;
inline constexpr double kPi = std::numbers::pi;

inline Vec3 operator+(const Vec3& a, const Vec3& b) { return {a[0] + b[0], a[1] + b[1], a[2] + b[2]}; }
inline Vec3 operator-(const Vec3& a, const Vec3& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }
inline Vec3 operator*(double s, const Vec3& a) { return {s * a[0], s * a[1], s * a[2]}; }
inline double dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }
inline double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }
inline Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

inline Mat3 matmul(const Mat3& a, const Mat3& b) {
  Mat3 c{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k) c[i][j] += a[i][k] * b[k][j];
  return c;
}

inline Mat3 transpose(const Mat3& a) {
  Mat3 t{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) t[i][j] = a[j][i];
  return t;
}

inline Vec3 matvec(const Mat3& a, const Vec3& v) {
  return {a[0][0] * v[0] + a[0][1] * v[1] + a[0][2] * v[2], a[1][0] * v[0] + a[1][1] * v[1] + a[1][2] * v[2],
          a[2][0] * v[0] + a[2][1] * v[1] + a[2][2] * v[2]};
}

class QTensor {
 public:
  using Coeffs = std::array<double, 5>;

  constexpr QTensor() = default;
  constexpr explicit QTensor(const Coeffs& c) : c_(c) {}

  /// Orthogonal projection of an arbitrary 3x3 matrix onto the symmetric traceless subspace.
  static QTensor from_matrix(const Mat3& m) {
    return QTensor(Coeffs{(m[0][0] - m[1][1]) / kSqrt2, (2.0 * m[2][2] - m[0][0] - m[1][1]) / kSqrt6,
                          (m[0][1] + m[1][0]) / kSqrt2, (m[0][2] + m[2][0]) / kSqrt2, (m[1][2] + m[2][1]) / kSqrt2});
  }

  Mat3 matrix() const {
    const double a = c_[0] / kSqrt2;
    const double b = c_[1] / kSqrt6;
    const double xy = c_[2] / kSqrt2, xz = c_[3] / kSqrt2, yz = c_[4] / kSqrt2;
    return Mat3{{{a - b, xy, xz}, {xy, -a - b, yz}, {xz, yz, 2.0 * b}}};
  }

  const Coeffs& coeffs() const { return c_; }
  double operator[](std::size_t i) const { return c_[i]; }
  double& operator[](std::size_t i) { return c_[i]; }

  QTensor& operator+=(const QTensor& o) {
    for (std::size_t i = 0; i < 5; ++i) c_[i] += o.c_[i];
    return *this;
  }
  QTensor& operator-=(const QTensor& o) {
    for (std::size_t i = 0; i < 5; ++i) c_[i] -= o.c_[i];
    return *this;
  }
  QTensor& operator*=(double s) {
    for (auto& v : c_) v *= s;
    return *this;
  }
  friend QTensor operator+(QTensor a, const QTensor& b) { return a += b; }
  friend QTensor operator-(QTensor a, const QTensor& b) { return a -= b; }
  friend QTensor operator*(double s, QTensor a) { return a *= s; }
  friend QTensor operator*(QTensor a, double s) { return a *= s; }
  friend QTensor operator/(QTensor a, double s) { return a *= 1.0 / s; }
  friend bool operator==(const QTensor&, const QTensor&) = default;

 private:
  Coeffs c_{};
};

/// Frobenius inner product Q:P.
inline double contract(const QTensor& a, const QTensor& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < 5; ++i) s += a[i] * b[i];
  return s;
}

inline double norm_sq(const QTensor& q) { return contract(q, q); }
inline double norm(const QTensor& q) { return std::sqrt(norm_sq(q)); }
inline double tr_Q2(const QTensor& q) { return norm_sq(q); }

inline double tr_Q3(const QTensor& q) {
  const Mat3 m = q.matrix();
  // Q symmetric: tr Q^3 = sum_ij (Q^2)_ij Q_ij.
  double s = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      const double q2 = m[i][0] * m[0][j] + m[i][1] * m[1][j] + m[i][2] * m[2][j];
      s += q2 * m[j][i];
    }
  return s;
}

/// Q^2 - (|Q|^2/3) I, the traceless part of the matrix square.
inline QTensor traceless_square(const QTensor& q) { return QTensor::from_matrix(matmul(q.matrix(), q.matrix())); }

/// T Q T^t for an orthogonal T.
inline QTensor rotate(const QTensor& q, const Mat3& t) {
  return QTensor::from_matrix(matmul(matmul(t, q.matrix()), transpose(t)));
}

/// sqrt(3/2) s (n x n - I/3); |result| = |s|.
inline QTensor from_uniaxial(double s, const Vec3& n) {
  if (std::abs(dot(n, n) - 1.0) > 1e-12) throw PreconditionError("from_uniaxial: director is not a unit vector");
  const double k = std::sqrt(1.5) * s;
  Mat3 m{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) m[i][j] = k * (n[i] * n[j] - (i == j ? 1.0 / 3.0 : 0.0));
  return QTensor::from_matrix(m);
}

struct EigenFrame {
  std::array<double, 3> values{};  // descending
  std::array<Vec3, 3> vectors{};   // vectors[k] belongs to values[k]
};

namespace detail {

inline Vec3 any_orthogonal(const Vec3& v) {
  const Vec3 e = std::abs(v[0]) < 0.9 ? Vec3{1, 0, 0} : Vec3{0, 1, 0};
  Vec3 u = cross(v, e);
  return (1.0 / norm(u)) * u;
}

inline EigenFrame sorted(EigenFrame f) {
  std::array<int, 3> idx{0, 1, 2};
  std::sort(idx.begin(), idx.end(), [&](int a, int b) { return f.values[a] > f.values[b]; });
  EigenFrame out;
  for (int k = 0; k < 3; ++k) {
    out.values[k] = f.values[idx[k]];
    out.vectors[k] = f.vectors[idx[k]];
  }
  return out;
}

// Cyclic Jacobi sweeps; used when the closed form is ill-conditioned.
inline EigenFrame jacobi_eigen(Mat3 a) {
  Mat3 v{{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}};
  for (int sweep = 0; sweep < 50; ++sweep) {
    const double off = a[0][1] * a[0][1] + a[0][2] * a[0][2] + a[1][2] * a[1][2];
    const double diag = a[0][0] * a[0][0] + a[1][1] * a[1][1] + a[2][2] * a[2][2];
    if (off <= 1e-34 * diag || off == 0.0) break;
    for (int p = 0; p < 2; ++p)
      for (int q = p + 1; q < 3; ++q) {
        if (a[p][q] == 0.0) continue;
        const double theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0), s = t * c;
        for (int k = 0; k < 3; ++k) {
          const double akp = a[k][p], akq = a[k][q];
          a[k][p] = c * akp - s * akq;
          a[k][q] = s * akp + c * akq;
        }
        for (int k = 0; k < 3; ++k) {
          const double apk = a[p][k], aqk = a[q][k];
          a[p][k] = c * apk - s * aqk;
          a[q][k] = s * apk + c * aqk;
        }
        for (int k = 0; k < 3; ++k) {
          const double vkp = v[k][p], vkq = v[k][q];
          v[k][p] = c * vkp - s * vkq;
          v[k][q] = s * vkp + c * vkq;
        }
      }
  }
  EigenFrame f;
  for (int k = 0; k < 3; ++k) {
    f.values[k] = a[k][k];
    f.vectors[k] = {v[0][k], v[1][k], v[2][k]};
  }
  return sorted(f);
}

}  // namespace detail

/// Eigen-decomposition of a symmetric traceless tensor.
///
/// Eigenvalues come from the trigonometric solution of the characteristic cubic. The
/// eigenvector of the most isolated eigenvalue is taken from the best-conditioned cross
/// product of rows of (Q - lambda I); the remaining pair is obtained by an exact 2x2
/// rotation in the orthogonal plane. Near-degenerate spectra fall back to Jacobi sweeps.
inline EigenFrame eigen(const QTensor& q) {
  const double nq2 = norm_sq(q);
  if (nq2 == 0.0) return EigenFrame{{0, 0, 0}, {Vec3{1, 0, 0}, Vec3{0, 1, 0}, Vec3{0, 0, 1}}};
  const Mat3 a = q.matrix();
  const double p = std::sqrt(nq2 / 6.0);
  // det(Q/p)/2 = tr((Q/p)^3)/6
  const double r = std::clamp(tr_Q3(q) / (6.0 * p * p * p), -1.0, 1.0);
  if (1.0 - r * r < 1e-14) return detail::jacobi_eigen(a);

  const double phi = std::acos(r) / 3.0;
  const double l1 = 2.0 * p * std::cos(phi);
  const double l3 = 2.0 * p * std::cos(phi + 2.0 * kPi / 3.0);
  const double l2 = -l1 - l3;
  const double lam = (l1 - l2 >= l2 - l3) ? l1 : l3;

  Vec3 rows[3];
  for (int i = 0; i < 3; ++i) rows[i] = {a[i][0] - (i == 0 ? lam : 0.0), a[i][1] - (i == 1 ? lam : 0.0),
                                         a[i][2] - (i == 2 ? lam : 0.0)};
  Vec3 best = cross(rows[0], rows[1]);
  for (const auto& c : {cross(rows[0], rows[2]), cross(rows[1], rows[2])})
    if (dot(c, c) > dot(best, best)) best = c;
  const Vec3 v = (1.0 / norm(best)) * best;

  const Vec3 u = detail::any_orthogonal(v);
  const Vec3 w = cross(v, u);
  const Vec3 au = matvec(a, u), aw = matvec(a, w);
  const double uu = dot(u, au), uw = dot(u, aw), ww = dot(w, aw);
  const double ang = 0.5 * std::atan2(2.0 * uw, uu - ww);
  const double c = std::cos(ang), s = std::sin(ang);
  const Vec3 e1 = c * u + s * w;
  const Vec3 e2 = (-s) * u + c * w;

  EigenFrame f;
  f.values = {dot(v, matvec(a, v)), dot(e1, matvec(a, e1)), dot(e2, matvec(a, e2))};
  f.vectors = {v, e1, e2};
  return detail::sorted(f);
}

/// beta = 1 - 6 (tr Q^3)^2 / |Q|^6, in [0,1]; zero for uniaxial tensors and (by convention) for Q = 0.
inline double biaxiality(const QTensor& q) {
  const double n2 = norm_sq(q);
  if (n2 == 0.0) return 0.0;
  const double t3 = tr_Q3(q);
  return std::clamp(1.0 - 6.0 * t3 * t3 / (n2 * n2 * n2), 0.0, 1.0);
}

}  // namespace ldg
