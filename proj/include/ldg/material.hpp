#pragma once

// Material constants, reduced (dimensionless) parameters and the bulk potential.

#include <cmath>
#include <optional>

#include "ldg/error.hpp"
#include "ldg/qtensor.hpp"

namespace ldg {

/// Dimensional constants of the low-temperature bulk potential plus elasticity and droplet radius.
struct MaterialParams {
  double a2 = 1.0;
  double b2 = 1.0;
  double c2 = 1.0;
  double L = 1.0;
  double R0 = 1.0;
};

struct ReducedParams {
  double t = 0.0;       // reduced temperature 27 a2 c2 / b2^2
  double h_plus = 0.0;  // (3 + sqrt(9 + 8t)) / 4
  double C_t = 0.0;     // shift making the reduced bulk density vanish on the minimizers
  double R_t = 0.0;     // droplet radius in units of xi_b
  // Only meaningful when the parameters were reduced from MaterialParams.
  std::optional<double> s_plus;
  std::optional<double> xi_b;

  /// 3 h_plus / t, the coefficient of the cubic correction in the reduced equations.
  double cubic_weight() const { return 3.0 * h_plus / t; }
};

inline double h_plus_of(double t) { return (3.0 + std::sqrt(9.0 + 8.0 * t)) / 4.0; }

/// Reduced parameters specified directly by temperature and radius.
inline ReducedParams reduced_from_temperature(double t, double R_t) {
  if (!(t > 0.0) || !std::isfinite(t)) throw ParameterError("reduced temperature must be positive and finite");
  if (!(R_t > 0.0) || !std::isfinite(R_t)) throw ParameterError("reduced radius must be positive and finite");
  ReducedParams rp;
  rp.t = t;
  rp.h_plus = h_plus_of(t);
  rp.C_t = 0.5 + rp.h_plus / t - rp.h_plus * rp.h_plus / (2.0 * t);
  rp.R_t = R_t;
  return rp;
}

inline ReducedParams reduce(const MaterialParams& p) {
  for (double v : {p.a2, p.b2, p.c2, p.L, p.R0})
    if (!(v > 0.0) || !std::isfinite(v)) throw ParameterError("material parameters must be positive and finite");
  const double t = 27.0 * p.a2 * p.c2 / (p.b2 * p.b2);
  const double xi_b = std::sqrt(27.0 * p.c2 * p.L / (t * p.b2 * p.b2));
  ReducedParams rp = reduced_from_temperature(t, p.R0 / xi_b);
  rp.xi_b = xi_b;
  rp.s_plus = (p.b2 + std::sqrt(p.b2 * p.b2 + 24.0 * p.a2 * p.c2)) / (4.0 * p.c2);
  return rp;
}

/// -(a2/2) tr Q^2 - (b2/3) tr Q^3 + (c2/4) (tr Q^2)^2
inline double bulk_f_dimensional(const QTensor& q, const MaterialParams& p) {
  const double t2 = tr_Q2(q);
  return -0.5 * p.a2 * t2 - p.b2 / 3.0 * tr_Q3(q) + 0.25 * p.c2 * t2 * t2;
}

/// Reduced bulk density, shifted by C(t) so that it is nonnegative and vanishes at |Q| = 1 uniaxial.
inline double bulk_f_reduced(const QTensor& q, const ReducedParams& rp) {
  const double t2 = tr_Q2(q);
  return -0.5 * t2 - kSqrt6 * rp.h_plus / rp.t * tr_Q3(q) + rp.h_plus * rp.h_plus / (2.0 * rp.t) * t2 * t2 + rp.C_t;
}

/// Reduced bulk density restricted to uniaxial tensors of norm h (tr Q^3 = h^3/sqrt6).
inline double bulk_f_uniaxial(double h, const ReducedParams& rp) {
  if (h < 0.0) throw DomainError("bulk_f_uniaxial: amplitude must be nonnegative");
  const double h2 = h * h;
  return -0.5 * h2 - rp.h_plus / rp.t * h2 * h + rp.h_plus * rp.h_plus / (2.0 * rp.t) * h2 * h2 + rp.C_t;
}

}  // namespace ldg
