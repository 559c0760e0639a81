#pragma once

#include <cmath>
#include <vector>

#include "ldg/fields.hpp"
#include "ldg/material.hpp"
#include "ldg/quadrature.hpp"

namespace ldg::testing {

// E[H + g(r) Z] - E[H] for Z = z z - I/3, g = A (1 - r/sigma)/(r^2 + 12)^2, integrated in
// spherical coordinates: the azimuth is exact by axial symmetry, r and cos(theta) by Gauss
// rules. Uses grad H : grad G = g' h' (M : Z) and |grad G|^2 = (2/3) g'^2.
inline double perturbation_energy_gap(const RadialProfile& p, const ReducedParams& rp, const PerturbationShape& shape,
                                      int panels = 2000) {
  const GaussRule gr = gauss_legendre(8);
  const GaussRule gc = gauss_legendre(64);
  const QTensor Z = axial_tensor();
  const double R = p.R;
  std::vector<double> terms;
  for (int k = 0; k < panels; ++k) {
    // panels refined toward the origin
    const double a = R * std::pow(static_cast<double>(k) / panels, 2), b = R * std::pow(static_cast<double>(k + 1) / panels, 2);
    const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
    for (std::size_t q = 0; q < gr.nodes.size(); ++q) {
      const double r = mid + half * gr.nodes[q];
      const double d = r * r + 12.0;
      const double g = shape.amplitude * (1.0 - r / shape.sigma) / (d * d);
      const double gp =
          shape.amplitude * (-1.0 / (shape.sigma * d * d) - (1.0 - r / shape.sigma) * 4.0 * r / (d * d * d));
      const ProfileSample s = interpolate_h(p, r);
      double angular = 0.0;
      for (std::size_t c = 0; c < gc.nodes.size(); ++c) {
        const double ct = gc.nodes[c], st = std::sqrt(1.0 - ct * ct);
        const QTensor M = from_uniaxial(1.0, {st, 0.0, ct});
        const QTensor H = s.h * M;
        const double df = bulk_f_reduced(H + g * Z, rp) - bulk_f_reduced(H, rp);
        angular += gc.weights[c] * (gp * s.dh * contract(M, Z) + gp * gp / 3.0 + df);
      }
      terms.push_back(2.0 * kPi * gr.weights[q] * half * r * r * angular);
    }
  }
  return pairwise_sum(terms);
}

}  // namespace ldg::testing
