#pragma once

// Reduced Landau-de Gennes energy
//
//   I[Q] = int_{B(0,R)} |grad Q|^2 / 2 + f_bulk(Q) dV
//
// by one-dimensional quadrature for radially symmetric profiles and by lattice
// quadrature for general BallFields.

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "ldg/fields.hpp"
#include "ldg/hedgehog_ode.hpp"
#include "ldg/material.hpp"
#include "ldg/quadrature.hpp"

namespace ldg {

struct EnergyBreakdown {
  double elastic = 0.0;
  double bulk = 0.0;
  double total = 0.0;
  double quadrature_error_estimate = 0.0;
};

namespace detail {

// Energy density of a uniaxial radial field with profile h: (h'^2 + 6h^2/r^2)/2 and bulk part.
inline std::pair<double, double> radial_density(const RadialProfile& p, const ReducedParams& rp, double r) {
  const ProfileSample s = interpolate_h(p, r);
  return {0.5 * (s.dh * s.dh + 6.0 * s.h * s.h / (r * r)), bulk_f_uniaxial(std::max(s.h, 0.0), rp)};
}

// Integral of 4 pi r^2 * density over [a, b] with a Gauss rule.
inline std::pair<double, double> radial_segment(const RadialProfile& p, const ReducedParams& rp, double a, double b,
                                                const GaussRule& g) {
  double el = 0.0, bu = 0.0;
  const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
  for (std::size_t q = 0; q < g.nodes.size(); ++q) {
    const double r = mid + half * g.nodes[q];
    const auto [e, f] = radial_density(p, rp, r);
    const double w = g.weights[q] * half * 4.0 * kPi * r * r;
    el += w * e;
    bu += w * f;
  }
  return {el, bu};
}

inline EnergyBreakdown radial_energy_with(const RadialProfile& p, const ReducedParams& rp, double r_max,
                                          const GaussRule& g) {
  std::vector<double> el, bu;
  double left = 0.0;
  for (std::size_t i = 0; i < p.size() && left < r_max; ++i) {
    const double right = std::min(p.r[i], r_max);
    const auto [e, f] = radial_segment(p, rp, left, right, g);
    el.push_back(e);
    bu.push_back(f);
    left = right;
  }
  EnergyBreakdown b;
  b.elastic = pairwise_sum(el);
  b.bulk = pairwise_sum(bu);
  b.total = b.elastic + b.bulk;
  return b;
}

}  // namespace detail

/// Energy of the radial field sqrt(3/2) h(r)(x x/r^2 - I/3) in B(0, r_max), composite
/// Gauss quadrature on the profile grid. The error estimate compares 5- and 3-point rules.
inline EnergyBreakdown radial_energy(const RadialProfile& p, const ReducedParams& rp, double r_max) {
  if (!(r_max > 0.0) || r_max > p.R * (1.0 + 1e-12)) throw DomainError("radial_energy: need 0 < r <= R");
  static const GaussRule g5 = gauss_legendre(5);
  static const GaussRule g3 = gauss_legendre(3);
  EnergyBreakdown b = detail::radial_energy_with(p, rp, std::min(r_max, p.R), g5);
  b.quadrature_error_estimate = std::abs(b.total - detail::radial_energy_with(p, rp, std::min(r_max, p.R), g3).total);
  return b;
}

inline EnergyBreakdown radial_energy(const RadialProfile& p, const ReducedParams& rp) {
  return radial_energy(p, rp, p.R);
}

/// Dirichlet energy of the director x/|x| over B(0, R) (integrand 2/r^2), on the profile grid.
inline double radial_director_energy(const RadialProfile& p) {
  static const GaussRule g = gauss_legendre(5);
  std::vector<double> parts;
  double left = 0.0;
  for (double right : p.r) {
    const double half = 0.5 * (right - left), mid = 0.5 * (right + left);
    double s = 0.0;
    for (std::size_t q = 0; q < g.nodes.size(); ++q) {
      const double r = mid + half * g.nodes[q];
      s += g.weights[q] * half * 4.0 * kPi * r * r * (2.0 / (r * r));
    }
    parts.push_back(s);
    left = right;
  }
  return pairwise_sum(parts);
}

struct MonotonicityPoint {
  double r;
  double E_over_r;
};

/// r -> E(B(0,r))/r by radial quadrature.
inline std::vector<MonotonicityPoint> monotonicity_scan(const RadialProfile& p, const ReducedParams& rp,
                                                        const std::vector<double>& radii) {
  std::vector<MonotonicityPoint> out;
  out.reserve(radii.size());
  double prev = 0.0;
  for (double r : radii) {
    if (!(r > prev) || r > p.R * (1.0 + 1e-12)) throw DomainError("monotonicity_scan: radii must increase within (0, R]");
    out.push_back({r, radial_energy(p, rp, r).total / r});
    prev = r;
  }
  return out;
}

/// Smallest increment E(r_{k+1})/r_{k+1} - E(r_k)/r_k in a scan (+inf for fewer than two points).
inline double min_increment(const std::vector<MonotonicityPoint>& scan) {
  double m = std::numeric_limits<double>::infinity();
  for (std::size_t k = 1; k < scan.size(); ++k) m = std::min(m, scan[k].E_over_r - scan[k - 1].E_over_r);
  return m;
}

/// int over the unit cube [-1/2, 1/2]^3 of |x|^-2 (= 3 int_{[-1/2,1/2]^2} dy dz / (1/4 + y^2 + z^2)).
inline double unit_cube_inverse_square_integral() {
  static const double value = [] {
    const GaussRule g = gauss_legendre(64);
    // Split each axis at 0 so the integrand's peak sits on panel edges.
    double s = 0.0;
    for (int sy : {-1, 1})
      for (int sz : {-1, 1})
        for (std::size_t a = 0; a < g.nodes.size(); ++a)
          for (std::size_t b = 0; b < g.nodes.size(); ++b) {
            const double y = sy * 0.25 * (g.nodes[a] + 1.0), z = sz * 0.25 * (g.nodes[b] + 1.0);
            s += 0.0625 * g.weights[a] * g.weights[b] / (0.25 + y * y + z * z);
          }
    return 3.0 * s;
  }();
  return value;
}

namespace detail {

// Fraction of the cube of side dx centred at x lying inside B(0, R) (8^3 midpoint samples).
inline double ball_volume_fraction(const Vec3& x, double R, double dx) {
  const double r = norm(x);
  const double half_diag = 0.5 * kSqrt3 * dx;
  if (r + half_diag <= R) return 1.0;
  if (r - half_diag >= R) return 0.0;
  constexpr int k = 8;
  int inside = 0;
  for (int a = 0; a < k; ++a)
    for (int b = 0; b < k; ++b)
      for (int c = 0; c < k; ++c) {
        const Vec3 y{x[0] + dx * ((a + 0.5) / k - 0.5), x[1] + dx * ((b + 0.5) / k - 0.5),
                     x[2] + dx * ((c + 0.5) / k - 0.5)};
        if (dot(y, y) < R * R) ++inside;
      }
  return static_cast<double>(inside) / (k * k * k);
}

// Per-node elastic and bulk contributions on the sub-lattice of stride `stride`.
struct NodeContributions {
  std::vector<double> elastic;
  std::vector<double> bulk;
  double core_correction = 0.0;  // analytic elastic energy of the excluded core cube
};

inline NodeContributions node_contributions(const BallField& f, const ReducedParams& rp, int stride) {
  const int n = f.n;
  const double h = f.dx * stride;
  const double cell = h * h * h;
  NodeContributions out;
  std::vector<int> idx;
  for (int i = 0; i < n; i += stride) idx.push_back(i);
  const auto value_at = [&](int i, int j, int k) -> QTensor {
    if (i < 0 || j < 0 || k < 0 || i >= n || j >= n || k >= n) return anchoring_datum(f.position(i, j, k));
    return f.values[f.index(i, j, k)];
  };

  int core_nodes = 0;
  for (int i : idx)
    if (std::abs(f.coord(i)) < 1.5 * h - 1e-12 * h) ++core_nodes;
  if (f.singular_core) out.core_correction = 3.0 * unit_cube_inverse_square_integral() * core_nodes * h;

  out.elastic.reserve(idx.size() * idx.size() * idx.size());
  out.bulk.reserve(idx.size() * idx.size() * idx.size());
  for (int i : idx)
    for (int j : idx)
      for (int k : idx) {
        const Vec3 x = f.position(i, j, k);
        const double w = ball_volume_fraction(x, f.R, h);
        const bool in_core = f.singular_core && std::abs(x[0]) < 1.5 * h - 1e-12 * h &&
                             std::abs(x[1]) < 1.5 * h - 1e-12 * h && std::abs(x[2]) < 1.5 * h - 1e-12 * h;
        if (w == 0.0 || in_core) {
          out.elastic.push_back(0.0);
          out.bulk.push_back(0.0);
          continue;
        }
        const QTensor q = value_at(i, j, k);
        double g2 = 0.0;
        const std::array<std::array<int, 3>, 3> dirs{{{stride, 0, 0}, {0, stride, 0}, {0, 0, stride}}};
        for (const auto& d : dirs) {
          const QTensor fw = value_at(i + d[0], j + d[1], k + d[2]) - q;
          const QTensor bw = q - value_at(i - d[0], j - d[1], k - d[2]);
          g2 += 0.5 * (norm_sq(fw) + norm_sq(bw));
        }
        out.elastic.push_back(w * cell * 0.5 * g2 / (h * h));
        out.bulk.push_back(w * cell * bulk_f_reduced(q, rp));
      }
  return out;
}

inline EnergyBreakdown sum_contributions(const NodeContributions& c) {
  EnergyBreakdown b;
  b.elastic = pairwise_sum(c.elastic) + c.core_correction;
  b.bulk = pairwise_sum(c.bulk);
  b.total = b.elastic + b.bulk;
  return b;
}

inline int coarse_nodes(int n) { return (n + 1) / 2; }

}  // namespace detail

/// Lattice quadrature of the energy. Each node carries the energy density (squared
/// gradient averaged over its forward and backward differences) times the volume of its
/// cell inside the ball; neighbours outside the lattice take the Dirichlet datum. Fields
/// with a singular core have the cube around the origin replaced by the exact integral
/// of 3/|x|^2. The error estimate is the difference to the same quadrature on the
/// stride-2 sub-lattice (infinite when that lattice would be too coarse).
inline EnergyBreakdown field_energy(const BallField& f, const ReducedParams& rp) {
  if (f.n < 16) throw ConfigError("field_energy: need at least 16 nodes across the diameter");
  EnergyBreakdown fine = detail::sum_contributions(detail::node_contributions(f, rp, 1));
  if (detail::coarse_nodes(f.n) >= 16) {
    const EnergyBreakdown coarse = detail::sum_contributions(detail::node_contributions(f, rp, 2));
    fine.quadrature_error_estimate = std::abs(fine.total - coarse.total);
  } else {
    fine.quadrature_error_estimate = std::numeric_limits<double>::infinity();
  }
  return fine;
}

struct EnergyComparison {
  EnergyBreakdown hedgehog;
  EnergyBreakdown perturbed;
  double delta = 0.0;      // E[H_b] - E[H]
  double delta_err = 0.0;  // two-grid difference of delta
  int grid_n = 0;
};

namespace detail {

inline double contribution_difference(const NodeContributions& a, const NodeContributions& b) {
  std::vector<double> d(a.elastic.size());
  for (std::size_t i = 0; i < d.size(); ++i) d[i] = (a.elastic[i] - b.elastic[i]) + (a.bulk[i] - b.bulk[i]);
  return pairwise_sum(d) + (a.core_correction - b.core_correction);
}

}  // namespace detail

/// Energies of the hedgehog and of its biaxial perturbation on the same lattice. The
/// difference is summed node by node so that the common quadrature error cancels.
inline EnergyComparison energy_compare_hedgehog_vs_perturbation(const RadialProfile& p, const ReducedParams& rp,
                                                                int grid_n, const PerturbationShape& shape = {}) {
  const BallField hh = sample_hedgehog(grid_n, p);
  const BallField hb = sample_perturbed_hedgehog(grid_n, p, shape);
  EnergyComparison c;
  c.grid_n = grid_n;
  c.hedgehog = field_energy(hh, rp);
  c.perturbed = field_energy(hb, rp);
  c.delta = detail::contribution_difference(detail::node_contributions(hb, rp, 1), detail::node_contributions(hh, rp, 1));
  if (detail::coarse_nodes(grid_n) >= 16) {
    const double coarse = detail::contribution_difference(detail::node_contributions(hb, rp, 2),
                                                          detail::node_contributions(hh, rp, 2));
    c.delta_err = std::abs(c.delta - coarse);
  } else {
    c.delta_err = std::numeric_limits<double>::infinity();
  }
  return c;
}

}  // namespace ldg
