#pragma once

// Quadrature checks of closed-form integral identities: monomial moments of the unit
// sphere, the cancellation for quadratic tensors B_ij(ab) x_a x_b / |x|^2 with the
// symmetry/trace constraints, and the flux bookkeeping for the quotient field S = Q/h.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "ldg/error.hpp"
#include "ldg/fields.hpp"
#include "ldg/hedgehog_ode.hpp"
#include "ldg/material.hpp"
#include "ldg/quadrature.hpp"

namespace ldg {

/// Rank-4 tensor B_{ij ab}, i,j,a,b in {0,1,2}.
class BTensor {
 public:
  double& operator()(int i, int j, int a, int b) { return v_[flat(i, j, a, b)]; }
  double operator()(int i, int j, int a, int b) const { return v_[flat(i, j, a, b)]; }
  const std::array<double, 81>& data() const { return v_; }
  std::array<double, 81>& data() { return v_; }

 private:
  static std::size_t flat(int i, int j, int a, int b) { return static_cast<std::size_t>(((i * 3 + j) * 3 + a) * 3 + b); }
  std::array<double, 81> v_{};
};

struct BConstraintViolation {
  double sym_ij = 0.0;    // max |B_ijab - B_jiab|
  double sym_ab = 0.0;    // max |B_ijab - B_ijba|
  double trace_ij = 0.0;  // max |B_iiab|
  double trace_ab = 0.0;  // max |B_ijaa|
  double max() const { return std::max(std::max(sym_ij, sym_ab), std::max(trace_ij, trace_ab)); }
};

inline BConstraintViolation constraint_violation(const BTensor& B) {
  BConstraintViolation v;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) {
          v.sym_ij = std::max(v.sym_ij, std::abs(B(i, j, a, b) - B(j, i, a, b)));
          v.sym_ab = std::max(v.sym_ab, std::abs(B(i, j, a, b) - B(i, j, b, a)));
        }
  for (int x = 0; x < 3; ++x)
    for (int y = 0; y < 3; ++y) {
      v.trace_ij = std::max(v.trace_ij, std::abs(B(0, 0, x, y) + B(1, 1, x, y) + B(2, 2, x, y)));
      v.trace_ab = std::max(v.trace_ab, std::abs(B(x, y, 0, 0) + B(x, y, 1, 1) + B(x, y, 2, 2)));
    }
  return v;
}

/// Projects onto tensors symmetric in (ij) and (ab) with vanishing ij- and ab-traces:
/// symmetrize both pairs, then remove traces until every contraction is below 1e-14.
inline BTensor project_btensor(const BTensor& in) {
  BTensor B;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b)
          B(i, j, a, b) = 0.25 * (in(i, j, a, b) + in(j, i, a, b) + in(i, j, b, a) + in(j, i, b, a));
  for (int sweep = 0;; ++sweep) {
    const BConstraintViolation v = constraint_violation(B);
    if (v.trace_ij < 1e-14 && v.trace_ab < 1e-14) break;
    if (sweep == 3) throw Error("project_btensor: trace removal did not converge in 3 sweeps");
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b) {
        const double tr = (B(0, 0, a, b) + B(1, 1, a, b) + B(2, 2, a, b)) / 3.0;
        for (int i = 0; i < 3; ++i) B(i, i, a, b) -= tr;
      }
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        const double tr = (B(i, j, 0, 0) + B(i, j, 1, 1) + B(i, j, 2, 2)) / 3.0;
        for (int a = 0; a < 3; ++a) B(i, j, a, a) -= tr;
      }
  }
  return B;
}

/// Standard-normal entries, projected onto the admissible subspace.
inline BTensor random_btensor(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  BTensor B;
  for (auto& x : B.data()) x = normal(rng);
  return project_btensor(B);
}

using Moment2 = std::array<std::array<double, 3>, 3>;
using Moment4 = std::array<std::array<std::array<std::array<double, 3>, 3>, 3>, 3>;

/// int_{|x|=1} x_q x_s dA by the product sphere rule.
inline Moment2 sphere_moment2(std::size_t order) {
  const SphereRule s = sphere_rule(order);
  Moment2 m{};
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) {
      std::vector<double> terms(s.points.size());
      for (std::size_t k = 0; k < terms.size(); ++k) terms[k] = s.weights[k] * s.points[k][a] * s.points[k][b];
      m[a][b] = pairwise_sum(terms);
    }
  return m;
}

/// int_{|x|=1} x_p x_q x_r x_s dA by the product sphere rule.
inline Moment4 sphere_moment4(std::size_t order) {
  const SphereRule s = sphere_rule(order);
  Moment4 m{};
  std::vector<double> terms(s.points.size());
  for (int p = 0; p < 3; ++p)
    for (int q = 0; q < 3; ++q)
      for (int r = 0; r < 3; ++r)
        for (int t = 0; t < 3; ++t) {
          for (std::size_t k = 0; k < terms.size(); ++k) {
            const Vec3& x = s.points[k];
            terms[k] = s.weights[k] * x[p] * x[q] * x[r] * x[t];
          }
          m[p][q][r][t] = pairwise_sum(terms);
        }
  return m;
}

/// (4 pi / 15)(d_pq d_rs + d_pr d_qs + d_ps d_qr)
inline double exact_moment4(int p, int q, int r, int s) {
  const auto d = [](int a, int b) { return a == b ? 1.0 : 0.0; };
  return 4.0 * kPi / 15.0 * (d(p, q) * d(r, s) + d(p, r) * d(q, s) + d(p, s) * d(q, r));
}

struct LemmaBValue {
  double quadrature = 0.0;
  double closed_form = 0.0;
};

/// int_{|x|=1} |grad(B_ijab x_a x_b/|x|^2)|^2/2 - 3 |B_ijab x_a x_b/|x|^2|^2/|x|^2 dA, by
/// quadrature with the analytic gradient, and the moment-reduced closed form
/// (4 pi/3)[2 B_ijrs B_ijrs - B_ijpp B_ijss - 2 B_ijqr B_ijrq]. No admissibility check.
inline LemmaBValue lemma_b_integral(const BTensor& B, std::size_t order) {
  const SphereRule s = sphere_rule(order);
  std::vector<double> terms(s.points.size());
  for (std::size_t k = 0; k < terms.size(); ++k) {
    const Vec3& x = s.points[k];
    double grad2 = 0.0, val2 = 0.0;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        double g = 0.0;
        for (int a = 0; a < 3; ++a)
          for (int b = 0; b < 3; ++b) g += B(i, j, a, b) * x[a] * x[b];
        val2 += g * g;
        for (int c = 0; c < 3; ++c) {
          double d = -2.0 * g * x[c];
          for (int b = 0; b < 3; ++b) d += (B(i, j, c, b) + B(i, j, b, c)) * x[b];
          grad2 += d * d;
        }
      }
    terms[k] = s.weights[k] * (0.5 * grad2 - 3.0 * val2);
  }
  double bb = 0.0, trtr = 0.0, swap = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      const double tr = B(i, j, 0, 0) + B(i, j, 1, 1) + B(i, j, 2, 2);
      trtr += tr * tr;
      for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) {
          bb += B(i, j, a, b) * B(i, j, a, b);
          swap += B(i, j, a, b) * B(i, j, b, a);
        }
    }
  return {pairwise_sum(terms), 4.0 * kPi / 3.0 * (2.0 * bb - trtr - 2.0 * swap)};
}

/// lemma_b_integral for admissible B (symmetric pairs, vanishing traces within 1e-12).
inline LemmaBValue lemma_b_value(const BTensor& B, std::size_t order) {
  if (constraint_violation(B).max() > 1e-12) throw PreconditionError("lemma_b_value: B violates the symmetry/trace constraints");
  return lemma_b_integral(B, order);
}

/// Pohozaev vector field Phi_p for the quotient S at x.
inline Vec3 pohozaev_flux_vector(const TensorField& s, const RadialProfile& p, const ReducedParams& rp, const Vec3& x) {
  const double r = norm(x);
  const Vec3 n = (1.0 / r) * x;
  const auto g = fd_gradient(s, x, 1e-3 * r);
  const QTensor sv = s(x);
  const QTensor radial = n[0] * g[0] + n[1] * g[1] + n[2] * g[2];
  const double grad2 = norm_sq(g[0]) + norm_sq(g[1]) + norm_sq(g[2]);
  const double defect = 1.0 - norm_sq(sv);
  const double h = interpolate_h(p, r).h;
  const double radial_part =
      0.5 * grad2 + (1.0 + rp.cubic_weight()) * h * h * defect * defect / 4.0 + 3.0 * defect / (r * r);
  Vec3 phi{};
  for (int k = 0; k < 3; ++k) phi[k] = radial_part * n[k] - contract(radial, g[k]);
  return phi;
}

/// Right-hand side of the Pohozaev balance (divergence of Phi for solutions of the S-equation):
/// (dS/dr)^2/r + (1 + 3h_+/t)(1 - |S|^2)^2/4 (2 h h' + 2h^2/r) + 2 (h'/h)(dS/dr)^2
///   - (3h_+/t) h (1 - |S|) S : dS/dr.
inline double pohozaev_source(const TensorField& s, const RadialProfile& p, const ReducedParams& rp, const Vec3& x) {
  const double r = norm(x);
  const Vec3 n = (1.0 / r) * x;
  const auto g = fd_gradient(s, x, 1e-3 * r);
  const QTensor sv = s(x);
  const QTensor radial = n[0] * g[0] + n[1] * g[1] + n[2] * g[2];
  const double dsr2 = norm_sq(radial);
  const double defect = 1.0 - norm_sq(sv);
  const ProfileSample hs = interpolate_h(p, r);
  return dsr2 / r + (1.0 + rp.cubic_weight()) * defect * defect / 4.0 * (2.0 * hs.h * hs.dh + 2.0 * hs.h * hs.h / r) +
         2.0 * hs.dh / hs.h * dsr2 - rp.cubic_weight() * hs.h * (1.0 - norm(sv)) * contract(sv, radial);
}

/// Divergence of Phi by fourth-order central differences.
inline double pohozaev_divergence(const TensorField& s, const RadialProfile& p, const ReducedParams& rp, const Vec3& x) {
  const double step = 1e-3 * norm(x);
  double div = 0.0;
  for (int k = 0; k < 3; ++k) {
    Vec3 e{0, 0, 0};
    e[k] = step;
    const double f1 = pohozaev_flux_vector(s, p, rp, x + e)[k] - pohozaev_flux_vector(s, p, rp, x - e)[k];
    const double f2 = pohozaev_flux_vector(s, p, rp, x + 2.0 * e)[k] - pohozaev_flux_vector(s, p, rp, x - 2.0 * e)[k];
    div += (8.0 * f1 - f2) / (12.0 * step);
  }
  return div;
}

struct PohozaevBalance {
  double flux_inner = 0.0;  // int_{|x|=delta} Phi . x/|x| dA
  double flux_outer = 0.0;  // int_{|x|=R} Phi . x/|x| dA
  double lhs = 0.0;         // flux_outer - flux_inner
  double rhs = 0.0;         // volume integral of the source over the annulus
  double divergence = 0.0;  // volume integral of div Phi over the annulus
};

struct PohozaevOptions {
  std::size_t sphere_order = 12;
  std::size_t radial_panels = 16;
  std::size_t radial_points = 8;
};

/// Both sides of the integrated Pohozaev balance on the annulus delta <= |x| <= R for S.
inline PohozaevBalance pohozaev_balance(const TensorField& s, const RadialProfile& p, const ReducedParams& rp,
                                        double delta, double R, const PohozaevOptions& opt = {}) {
  if (!(delta > 0.0) || !(delta < R) || R > p.R * (1.0 + 1e-12)) throw DomainError("pohozaev_balance: need 0 < delta < R <= profile R");
  const SphereRule sph = sphere_rule(opt.sphere_order);
  const GaussRule g = gauss_legendre(opt.radial_points);
  const auto surface = [&](double rad) {
    std::vector<double> terms(sph.points.size());
    for (std::size_t k = 0; k < terms.size(); ++k)
      terms[k] = sph.weights[k] * rad * rad * dot(pohozaev_flux_vector(s, p, rp, rad * sph.points[k]), sph.points[k]);
    return pairwise_sum(terms);
  };
  PohozaevBalance b;
  // Slightly inside R so the finite-difference stencils stay in the profile's domain.
  const double outer = R < p.R ? R : R * (1.0 - 1e-2);
  b.flux_inner = surface(delta);
  b.flux_outer = surface(outer);
  b.lhs = b.flux_outer - b.flux_inner;

  // Radial panels geometric in r to follow the 1/r^2 behaviour near the inner sphere.
  std::vector<double> src, div;
  const double ratio = std::pow(outer / delta, 1.0 / static_cast<double>(opt.radial_panels));
  double left = delta;
  for (std::size_t k = 0; k < opt.radial_panels; ++k) {
    const double right = k + 1 == opt.radial_panels ? outer : left * ratio;
    const double half = 0.5 * (right - left), mid = 0.5 * (right + left);
    for (std::size_t q = 0; q < g.nodes.size(); ++q) {
      const double r = mid + half * g.nodes[q];
      for (std::size_t a = 0; a < sph.points.size(); ++a) {
        const double w = g.weights[q] * half * r * r * sph.weights[a];
        const Vec3 x = r * sph.points[a];
        src.push_back(w * pohozaev_source(s, p, rp, x));
        div.push_back(w * pohozaev_divergence(s, p, rp, x));
      }
    }
    left = right;
  }
  b.rhs = pairwise_sum(src);
  b.divergence = pairwise_sum(div);
  return b;
}

/// Hedgehog specialization: S = H/h.
inline PohozaevBalance pohozaev_balance(const RadialProfile& p, const ReducedParams& rp, double delta, double R,
                                        const PohozaevOptions& opt = {}) {
  const TensorField hedgehog = [&p](const Vec3& x) { return hedgehog_field(p, x); };
  const TensorField s = [&p, hedgehog](const Vec3& x) { return divide_by_profile(hedgehog, p, x); };
  return pohozaev_balance(s, p, rp, delta, R, opt);
}

struct IdentityCheck {
  std::string name;
  double value = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

struct IdentitySuiteOptions {
  std::size_t order = 12;  // sphere rule for moments and the B-tensor integral
  int count = 100;         // random B tensors
  std::uint64_t seed = 1;
};

/// Runs every identity check against a solved hedgehog profile.
inline std::vector<IdentityCheck> identity_suite(const RadialProfile& p, const ReducedParams& rp,
                                                 const IdentitySuiteOptions& opt = {}) {
  if (opt.count < 1) throw ConfigError("identity suite: count must be positive");
  std::vector<IdentityCheck> out;
  const auto add = [&out](std::string name, double value, double tol) {
    out.push_back({std::move(name), value, tol, std::isfinite(value) && value <= tol});
  };

  const Moment2 m2 = sphere_moment2(opt.order);
  double e2 = 0.0;
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) e2 = std::max(e2, std::abs(m2[a][b] - (a == b ? 4.0 * kPi / 3.0 : 0.0)));
  add("sphere_moment2_max_error", e2, 1e-12);

  const Moment4 m4 = sphere_moment4(opt.order);
  double e4 = 0.0;
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b)
      for (int c = 0; c < 3; ++c)
        for (int d = 0; d < 3; ++d) e4 = std::max(e4, std::abs(m4[a][b][c][d] - exact_moment4(a, b, c, d)));
  add("sphere_moment4_max_error", e4, 1e-12);

  double constraint = 0.0, value = 0.0, agreement = 0.0;
  for (int k = 0; k < opt.count; ++k) {
    const BTensor B = random_btensor(opt.seed + static_cast<std::uint64_t>(k));
    constraint = std::max(constraint, constraint_violation(B).max());
    const LemmaBValue v = lemma_b_value(B, opt.order);
    value = std::max(value, std::abs(v.quadrature));
    agreement = std::max(agreement, std::abs(v.quadrature - v.closed_form));
  }
  add("btensor_constraint_max_violation", constraint, 1e-14);
  add("lemma_b_max_abs_value", value, 1e-10);
  add("lemma_b_closed_form_agreement", agreement, 1e-9);

  const TensorField hedgehog = [&p](const Vec3& x) { return hedgehog_field(p, x); };
  const TensorField s = [&p, hedgehog](const Vec3& x) { return divide_by_profile(hedgehog, p, x); };
  for (const double delta : {0.05, 0.5, 5.0}) {
    if (!(delta < p.R)) continue;
    char name[64];
    std::snprintf(name, sizeof name, "hedgehog_flux_minus_12pi_delta_%g", delta);
    add(name, std::abs(flux_phi(s, p, rp, delta).flux - 12.0 * kPi), 1e-6);
  }

  const PohozaevBalance b = pohozaev_balance(p, rp, 0.5, std::min(10.0, p.R));
  add("pohozaev_lhs_abs", std::abs(b.lhs), 1e-8);
  add("pohozaev_rhs_abs", std::abs(b.rhs), 1e-8);
  return out;
}

}  // namespace ldg
