#pragma once

// Radial-hedgehog profile:
//
//   h'' + (2/r) h' - 6h/r^2 = h^3 - h + (3 h_+/t)(h^3 - h^2),   h(0) = 0,  h(r) -> 1.
//
// Solved on (0, R] with the far-field condition h(R) = 1 - 6/((2 + 3h_+/t) R^2) obtained by
// linearizing about h = 1. Nodes r_i = R (i/N)^2, i = 1..N, cluster at the origin; the
// equation is discretized with three-point central differences on this nonuniform grid
// and solved with damped Newton iteration (tridiagonal Jacobian).

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "ldg/error.hpp"
#include "ldg/material.hpp"

namespace ldg {

struct RadialProfile {
  std::vector<double> r;   // strictly increasing, r.front() > 0, r.back() == R
  std::vector<double> h;
  std::vector<double> dh;
  double d2h0 = 0.0;       // h''(0)
  double h_origin = 0.0;   // h(0); zero for a genuine hedgehog
  double t = 0.0;
  double R = 0.0;

  std::size_t size() const { return r.size(); }
};

struct ProfileSolverOptions {
  int max_iterations = 100;
  double update_tol = 1e-10;
  double residual_tol = 1e-8;
};

/// h(R) from the linearized far field.
inline double far_field_value(double t, double R) {
  return 1.0 - 6.0 / ((2.0 + 3.0 * h_plus_of(t) / t) * R * R);
}

namespace detail {

inline std::vector<double> mapped_grid(double R, std::size_t N) {
  std::vector<double> r(N);
  for (std::size_t i = 0; i < N; ++i) {
    const double s = static_cast<double>(i + 1) / static_cast<double>(N);
    r[i] = R * s * s;
  }
  r.back() = R;
  return r;
}

// Three-point weights for first and second derivatives at a node with left gap dm and right gap dp.
struct Stencil {
  double d1m, d10, d1p;  // first derivative
  double d2m, d20, d2p;  // second derivative
};

inline Stencil stencil(double dm, double dp) {
  const double s = dm + dp;
  return {-dp / (dm * s), (dp - dm) / (dm * dp), dm / (dp * s), 2.0 / (dm * s), -2.0 / (dm * dp), 2.0 / (dp * s)};
}

inline double reaction(double h, double a) { return h * h * h - h + a * (h * h * h - h * h); }
inline double reaction_dh(double h, double a) { return 3.0 * h * h - 1.0 + a * (3.0 * h * h - 2.0 * h); }

// Residual of the discrete equation at interior node i (all nodes except the last).
inline double node_residual(const std::vector<double>& r, const std::vector<double>& h, double h_origin,
                            std::size_t i, double a) {
  const double rm = i == 0 ? 0.0 : r[i - 1];
  const double hm = i == 0 ? h_origin : h[i - 1];
  const Stencil st = stencil(r[i] - rm, r[i + 1] - r[i]);
  const double d1 = st.d1m * hm + st.d10 * h[i] + st.d1p * h[i + 1];
  const double d2 = st.d2m * hm + st.d20 * h[i] + st.d2p * h[i + 1];
  return d2 + 2.0 * d1 / r[i] - 6.0 * h[i] / (r[i] * r[i]) - reaction(h[i], a);
}

inline double max_residual(const std::vector<double>& r, const std::vector<double>& h, double h_origin, double a) {
  double m = 0.0;
  for (std::size_t i = 0; i + 1 < r.size(); ++i) m = std::max(m, std::abs(node_residual(r, h, h_origin, i, a)));
  return m;
}

// Thomas algorithm; sub[0] and sup[n-1] are unused.
inline std::vector<double> solve_tridiagonal(std::vector<double> sub, std::vector<double> diag,
                                             std::vector<double> sup, std::vector<double> rhs) {
  const std::size_t n = diag.size();
  for (std::size_t i = 1; i < n; ++i) {
    const double m = sub[i] / diag[i - 1];
    diag[i] -= m * sup[i - 1];
    rhs[i] -= m * rhs[i - 1];
  }
  std::vector<double> x(n);
  x[n - 1] = rhs[n - 1] / diag[n - 1];
  for (std::size_t i = n - 1; i-- > 0;) x[i] = (rhs[i] - sup[i] * x[i + 1]) / diag[i];
  return x;
}

// Nodal derivative: central three-point inside, one-sided three-point at the last node.
inline std::vector<double> nodal_derivative(const std::vector<double>& r, const std::vector<double>& h,
                                            double h_origin) {
  const std::size_t n = r.size();
  std::vector<double> d(n);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double rm = i == 0 ? 0.0 : r[i - 1];
    const double hm = i == 0 ? h_origin : h[i - 1];
    const Stencil st = stencil(r[i] - rm, r[i + 1] - r[i]);
    d[i] = st.d1m * hm + st.d10 * h[i] + st.d1p * h[i + 1];
  }
  const double h1 = r[n - 1] - r[n - 2], h2 = r[n - 2] - r[n - 3];
  // Lagrange derivative at x2 through (x0, x1, x2) with gaps h2 = x1 - x0, h1 = x2 - x1.
  d[n - 1] = h[n - 3] * h1 / (h2 * (h1 + h2)) - h[n - 2] * (h1 + h2) / (h1 * h2) +
             h[n - 1] * (2.0 * h1 + h2) / (h1 * (h1 + h2));
  return d;
}

// h = a r^2 + b r^4 through the first two nodes; returns h''(0) = 2a.
inline double curvature_at_origin(const std::vector<double>& r, const std::vector<double>& h, double h_origin) {
  const double r1 = r[0] * r[0], r2 = r[1] * r[1];
  const double y1 = h[0] - h_origin, y2 = h[1] - h_origin;
  const double a = (y1 * r2 * r2 - y2 * r1 * r1) / (r1 * r2 * r2 - r2 * r1 * r1);
  return 2.0 * a;
}

}  // namespace detail

/// Solves the hedgehog profile on N nodes of (0, R].
inline RadialProfile solve_profile(double t, double R, std::size_t N, const ProfileSolverOptions& opt = {}) {
  if (!(t > 1.0)) throw DomainError("solve_profile: need t > 1");
  if (!(R >= 10.0)) throw DomainError("solve_profile: need R >= 10");
  if (N < 200) throw DomainError("solve_profile: need N >= 200");

  const double a = 3.0 * h_plus_of(t) / t;
  RadialProfile p;
  p.t = t;
  p.R = R;
  p.r = detail::mapped_grid(R, N);
  p.h.resize(N);
  for (std::size_t i = 0; i < N; ++i) p.h[i] = p.r[i] * p.r[i] / (p.r[i] * p.r[i] + 3.0);
  p.h.back() = far_field_value(t, R);

  const std::size_t m = N - 1;  // unknowns h[0..N-2]
  double res = detail::max_residual(p.r, p.h, 0.0, a);
  bool converged = false;
  for (int iter = 0; iter < opt.max_iterations; ++iter) {
    std::vector<double> sub(m), diag(m), sup(m), rhs(m);
    for (std::size_t i = 0; i < m; ++i) {
      const double rm = i == 0 ? 0.0 : p.r[i - 1];
      const auto st = detail::stencil(p.r[i] - rm, p.r[i + 1] - p.r[i]);
      const double ri = p.r[i];
      sub[i] = st.d2m + 2.0 * st.d1m / ri;
      diag[i] = st.d20 + 2.0 * st.d10 / ri - 6.0 / (ri * ri) - detail::reaction_dh(p.h[i], a);
      sup[i] = st.d2p + 2.0 * st.d1p / ri;
      rhs[i] = -detail::node_residual(p.r, p.h, 0.0, i, a);
    }
    const std::vector<double> delta = detail::solve_tridiagonal(sub, diag, sup, rhs);

    double step = 1.0;
    std::vector<double> trial = p.h;
    double trial_res = res;
    for (int k = 0; k < 40; ++k) {
      for (std::size_t i = 0; i < m; ++i) trial[i] = p.h[i] + step * delta[i];
      trial_res = detail::max_residual(p.r, trial, 0.0, a);
      if (std::isfinite(trial_res) && (trial_res < res || trial_res <= opt.residual_tol)) break;
      step *= 0.5;
    }
    if (!std::isfinite(trial_res)) throw SolverError("solve_profile: non-finite residual", res);

    double max_update = 0.0;
    for (std::size_t i = 0; i < m; ++i) max_update = std::max(max_update, std::abs(step * delta[i]));
    p.h = std::move(trial);
    res = trial_res;
    if (max_update < opt.update_tol && res < opt.residual_tol) {
      converged = true;
      break;
    }
  }
  if (!converged) throw SolverError("solve_profile: Newton iteration did not converge", res);

  p.dh = detail::nodal_derivative(p.r, p.h, 0.0);
  p.d2h0 = detail::curvature_at_origin(p.r, p.h, 0.0);
  return p;
}

/// Profile h(r) = value on the solver grid; value = 1 is the limiting harmonic map.
inline RadialProfile constant_profile(double value, double t, double R, std::size_t N) {
  if (N < 3) throw DomainError("constant_profile: need at least 3 nodes");
  RadialProfile p;
  p.t = t;
  p.R = R;
  p.r = detail::mapped_grid(R, N);
  p.h.assign(N, value);
  p.dh.assign(N, 0.0);
  p.h_origin = value;
  return p;
}

/// Discrete residual of the profile equation at node i (zero at the boundary node).
inline double profile_node_residual(const RadialProfile& p, std::size_t i) {
  if (i + 1 >= p.size()) return 0.0;
  return detail::node_residual(p.r, p.h, p.h_origin, i, 3.0 * h_plus_of(p.t) / p.t);
}

/// Max-norm residual of the profile equation over the interior nodes.
inline double profile_residual(const RadialProfile& p) {
  return detail::max_residual(p.r, p.h, p.h_origin, 3.0 * h_plus_of(p.t) / p.t);
}

struct ProfileSample {
  double h;
  double dh;
};

/// Piecewise cubic Hermite interpolation of (h, h'). On [0, r_1] the left end is
/// (h(0), h'(0) = 0), which reproduces h ~ h''(0) r^2 / 2 for the hedgehog.
inline ProfileSample interpolate_h(const RadialProfile& p, double r) {
  const double tol = 1e-12 * p.R;
  if (!(r >= 0.0) || r > p.R + tol) throw DomainError("interpolate_h: r outside [0, R]");
  r = std::min(r, p.R);
  if (r == 0.0) return {p.h_origin, 0.0};

  const auto it = std::lower_bound(p.r.begin(), p.r.end(), r);
  const std::size_t j = static_cast<std::size_t>(it - p.r.begin());
  if (it != p.r.end() && *it == r) return {p.h[j], p.dh[j]};

  double x0, y0, d0;
  if (j == 0) {
    x0 = 0.0, y0 = p.h_origin, d0 = 0.0;
  } else {
    x0 = p.r[j - 1], y0 = p.h[j - 1], d0 = p.dh[j - 1];
  }
  const double x1 = p.r[j], y1 = p.h[j], d1 = p.dh[j];
  const double w = x1 - x0;
  const double s = (r - x0) / w;
  const double s2 = s * s, s3 = s2 * s;
  const double h00 = 2 * s3 - 3 * s2 + 1, h10 = s3 - 2 * s2 + s, h01 = -2 * s3 + 3 * s2, h11 = s3 - s2;
  const double value = h00 * y0 + h10 * w * d0 + h01 * y1 + h11 * w * d1;
  const double g00 = 6 * s2 - 6 * s, g10 = 3 * s2 - 4 * s + 1, g01 = -6 * s2 + 6 * s, g11 = 3 * s2 - 2 * s;
  const double slope = (g00 * y0 + g01 * y1) / w + g10 * d0 + g11 * d1;
  return {value, slope};
}

/// sup over nodes with r in [R/2, R] of |h'| r^3.
inline double decay_check(const RadialProfile& p) {
  if (p.R < 20.0) throw DomainError("decay_check: need R >= 20");
  double m = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i)
    if (p.r[i] >= 0.5 * p.R) m = std::max(m, std::abs(p.dh[i]) * p.r[i] * p.r[i] * p.r[i]);
  return m;
}

/// Bounds certified for a solved profile.
struct ProfileBounds {
  double residual = 0.0;
  double min_increment = 0.0;    // min_i (h_{i+1} - h_i)
  double min_h = 0.0;
  double max_h = 0.0;
  double envelope_margin = 0.0;  // min_i (h_i - r_i^2/(r_i^2 + 14))
  double core_margin = 0.0;      // min over r_i <= 1 of (h_i - r_i^2/15)
  double d2h0 = 0.0;

  bool pass() const {
    return residual < 1e-8 && min_increment >= -1e-12 && min_h >= 0.0 && max_h <= 1.0 && envelope_margin >= 0.0 &&
           core_margin >= 0.0 && d2h0 > 0.0;
  }
};

inline ProfileBounds profile_bounds(const RadialProfile& p) {
  ProfileBounds b;
  b.residual = profile_residual(p);
  b.min_increment = p.h.front() - p.h_origin;
  b.min_h = std::min(p.h_origin, *std::min_element(p.h.begin(), p.h.end()));
  b.max_h = std::max(p.h_origin, *std::max_element(p.h.begin(), p.h.end()));
  b.envelope_margin = std::numeric_limits<double>::infinity();
  b.core_margin = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double r2 = p.r[i] * p.r[i];
    if (i + 1 < p.size()) b.min_increment = std::min(b.min_increment, p.h[i + 1] - p.h[i]);
    b.envelope_margin = std::min(b.envelope_margin, p.h[i] - r2 / (r2 + 14.0));
    if (p.r[i] <= 1.0) b.core_margin = std::min(b.core_margin, p.h[i] - r2 / 15.0);
  }
  b.d2h0 = p.d2h0;
  return b;
}

}  // namespace ldg
