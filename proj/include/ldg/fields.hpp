#pragma once

// Q-tensor fields on the ball B(0, R): closed-form fields (limiting harmonic map, radial
// hedgehog, biaxial perturbation of the hedgehog), the quotient S = Q/h, the sphere flux of
// the Pohozaev vector field, and lattice samples of fields (BallField).

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "ldg/error.hpp"
#include "ldg/hedgehog_ode.hpp"
#include "ldg/material.hpp"
#include "ldg/qtensor.hpp"
#include "ldg/quadrature.hpp"

namespace ldg {

using TensorField = std::function<QTensor(const Vec3&)>;

/// sqrt(3/2) (x x / |x|^2 - I/3): the limiting harmonic map, also the Dirichlet datum.
inline QTensor harmonic_map_field(const Vec3& x) {
  const double r = norm(x);
  if (r == 0.0) throw SingularPointError("harmonic_map_field: undefined at the origin");
  return from_uniaxial(1.0, (1.0 / r) * x);
}

/// Radial hedgehog sqrt(3/2) h(|x|) (x x/|x|^2 - I/3); zero at the origin.
inline QTensor hedgehog_field(const RadialProfile& p, const Vec3& x) {
  const double r = norm(x);
  if (r > p.R * (1.0 + 1e-12)) throw DomainError("hedgehog_field: |x| > R");
  if (r == 0.0) return QTensor{};
  return from_uniaxial(interpolate_h(p, r).h, (1.0 / r) * x);
}

/// Parameters of the axial perturbation amplitude (1 - r/sigma)/(r^2 + 12)^2 along z.
struct PerturbationShape {
  double sigma = 10.0;
  double amplitude = 1.0;
};

/// z z - I/3 as a QTensor.
inline QTensor axial_tensor() { return from_uniaxial(std::sqrt(2.0 / 3.0), Vec3{0, 0, 1}); }

/// H(x) + amplitude (r^2 + 12)^-2 (1 - r/sigma) (z z - I/3).
inline QTensor biaxial_perturbation_field(const RadialProfile& p, const Vec3& x, const PerturbationShape& shape = {}) {
  const double r = norm(x);
  if (r > p.R * (1.0 + 1e-12)) throw DomainError("biaxial_perturbation_field: |x| > R");
  const double d = r * r + 12.0;
  const double g = shape.amplitude * (1.0 - r / shape.sigma) / (d * d);
  return hedgehog_field(p, x) + g * axial_tensor();
}

/// Smallest radius at which S = Q/h is evaluated.
inline double quotient_cutoff(const RadialProfile& p) { return 1e-4 * p.R; }

/// S(x) = Q(x) / h(|x|).
inline QTensor divide_by_profile(const TensorField& q, const RadialProfile& p, const Vec3& x) {
  const double r = norm(x);
  if (r < quotient_cutoff(p)) throw SingularPointError("divide_by_profile: |x| below the cutoff radius");
  const double h = interpolate_h(p, r).h;
  if (h < 1e-14) throw SingularPointError("divide_by_profile: profile vanishes");
  return q(x) / h;
}

/// Gradient of a field closure by fourth-order central differences with step `step`.
inline std::array<QTensor, 3> fd_gradient(const TensorField& f, const Vec3& x, double step) {
  std::array<QTensor, 3> g;
  for (int k = 0; k < 3; ++k) {
    Vec3 e{0, 0, 0};
    e[k] = step;
    const QTensor p1 = f(x + e), m1 = f(x - e), p2 = f(x + 2.0 * e), m2 = f(x - 2.0 * e);
    g[k] = (8.0 * (p1 - m1) - (p2 - m2)) / (12.0 * step);
  }
  return g;
}

struct FluxDiagnostic {
  double delta = 0.0;
  double flux = 0.0;
};

/// Flux of the Pohozaev vector field through the sphere |x| = delta:
///   int ( |grad S|^2/2 - (dS/dr)^2 + (1 + 3h_+/t) h^2 (1 - |S|^2)^2 / 4 + 3 (1 - |S|^2)/delta^2 ) dA.
inline FluxDiagnostic flux_phi(const TensorField& s, const RadialProfile& p, const ReducedParams& rp, double delta,
                               std::size_t order = 32) {
  if (!(delta > quotient_cutoff(p)) || !(delta < p.R)) throw DomainError("flux_phi: need r_min < delta < R");
  const SphereRule rule = sphere_rule(order);
  const double h = interpolate_h(p, delta).h;
  const double step = 1e-3 * delta;
  std::vector<double> terms(rule.points.size());
  for (std::size_t q = 0; q < rule.points.size(); ++q) {
    const Vec3& n = rule.points[q];
    const Vec3 x = delta * n;
    const auto g = fd_gradient(s, x, step);
    const QTensor sv = s(x);
    const QTensor radial = n[0] * g[0] + n[1] * g[1] + n[2] * g[2];
    const double grad2 = norm_sq(g[0]) + norm_sq(g[1]) + norm_sq(g[2]);
    const double defect = 1.0 - norm_sq(sv);
    const double integrand = 0.5 * grad2 - norm_sq(radial) +
                             (1.0 + rp.cubic_weight()) * h * h * defect * defect / 4.0 +
                             3.0 * defect / (delta * delta);
    terms[q] = rule.weights[q] * delta * delta * integrand;
  }
  return {delta, pairwise_sum(terms)};
}

enum class NodeKind : std::uint8_t { interior, boundary, exterior };

/// Q-tensor field on the uniform lattice over [-R, R]^3 (n nodes per axis). Nodes with
/// |x| < R - dx/2 are interior; every other node carries the radial Dirichlet datum.
struct BallField {
  int n = 0;
  double R = 0.0;
  double t = 0.0;
  double dx = 0.0;
  std::vector<QTensor> values;
  std::vector<NodeKind> mask;
  std::string provenance;
  // The sampled field has the |x|^-1 gradient singularity of the harmonic map at the origin.
  bool singular_core = false;

  std::size_t index(int i, int j, int k) const {
    return (static_cast<std::size_t>(i) * static_cast<std::size_t>(n) + static_cast<std::size_t>(j)) *
               static_cast<std::size_t>(n) +
           static_cast<std::size_t>(k);
  }
  double coord(int i) const { return -R + dx * i; }
  Vec3 position(int i, int j, int k) const { return {coord(i), coord(j), coord(k)}; }
  std::size_t size() const { return values.size(); }
};

inline NodeKind classify_node(const Vec3& x, double R, double dx) {
  const double r = norm(x);
  if (r < R - 0.5 * dx) return NodeKind::interior;
  if (r <= R + 0.5 * dx) return NodeKind::boundary;
  return NodeKind::exterior;
}

/// Dirichlet datum extended to all of space; zero at the origin.
inline QTensor anchoring_datum(const Vec3& x) { return norm(x) == 0.0 ? QTensor{} : harmonic_map_field(x); }

/// Samples `f` at interior nodes and the Dirichlet datum elsewhere. A field with a
/// singular core may throw at the origin; that node is then set to zero.
inline BallField sample_ball(int n, double R, double t, const TensorField& f, std::string provenance,
                             bool singular_core = false) {
  if (n < 16) throw ConfigError("BallField: need at least 16 nodes across the diameter");
  if (!(R > 0.0)) throw ConfigError("BallField: radius must be positive");
  BallField b;
  b.n = n;
  b.R = R;
  b.t = t;
  b.dx = 2.0 * R / (n - 1);
  b.provenance = std::move(provenance);
  b.singular_core = singular_core;
  b.values.resize(static_cast<std::size_t>(n) * n * n);
  b.mask.resize(b.values.size());
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        const Vec3 x = b.position(i, j, k);
        const std::size_t id = b.index(i, j, k);
        b.mask[id] = classify_node(x, R, b.dx);
        if (b.mask[id] != NodeKind::interior) {
          b.values[id] = anchoring_datum(x);
        } else if (norm(x) == 0.0 && singular_core) {
          b.values[id] = QTensor{};
        } else {
          b.values[id] = f(x);
        }
      }
  return b;
}

inline BallField sample_harmonic_map(int n, double R, double t) {
  return sample_ball(n, R, t, harmonic_map_field, "harmonic_map", true);
}

inline BallField sample_frozen_boundary(int n, double R, double t) {
  return sample_ball(n, R, t, anchoring_datum, "frozen_boundary_extension", true);
}

inline BallField sample_hedgehog(int n, const RadialProfile& p) {
  return sample_ball(n, p.R, p.t, [&p](const Vec3& x) { return hedgehog_field(p, x); }, "hedgehog");
}

inline BallField sample_perturbed_hedgehog(int n, const RadialProfile& p, const PerturbationShape& shape = {}) {
  return sample_ball(n, p.R, p.t, [&p, shape](const Vec3& x) { return biaxial_perturbation_field(p, x, shape); },
                     "perturbed_hedgehog");
}

/// Largest biaxiality over nodes with |x| < radius.
inline double max_biaxiality(const BallField& f, double radius) {
  double m = 0.0;
  for (int i = 0; i < f.n; ++i)
    for (int j = 0; j < f.n; ++j)
      for (int k = 0; k < f.n; ++k)
        if (norm(f.position(i, j, k)) < radius) m = std::max(m, biaxiality(f.values[f.index(i, j, k)]));
  return m;
}

}  // namespace ldg
