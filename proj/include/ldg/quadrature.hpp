#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <utility>
#include <algorithm>
#include <vector>

#include "ldg/error.hpp"
#include "ldg/qtensor.hpp"

namespace ldg {

struct GaussRule {
  std::vector<double> nodes;    // on [-1, 1], ascending
  std::vector<double> weights;
};

namespace detail {

// Returns (P_n(x), P_n'(x)) by the three-term recurrence.
inline std::pair<double, double> legendre(std::size_t n, double x) {
  double p0 = 1.0, p1 = x;
  for (std::size_t k = 2; k <= n; ++k) {
    const double kk = static_cast<double>(k);
    const double pk = ((2.0 * kk - 1.0) * x * p1 - (kk - 1.0) * p0) / kk;
    p0 = p1;
    p1 = pk;
  }
  return {p1, static_cast<double>(n) * (x * p1 - p0) / (x * x - 1.0)};
}

}  // namespace detail

/// n-point Gauss-Legendre rule via Newton iteration on P_n.
inline GaussRule gauss_legendre(std::size_t n) {
  if (n == 0) throw ConfigError("gauss_legendre: need at least one node");
  GaussRule g;
  g.nodes.resize(n);
  g.weights.resize(n);
  for (std::size_t i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(kPi * (static_cast<double>(i) + 0.75) / (static_cast<double>(n) + 0.5));
    for (int it = 0; it < 100; ++it) {
      const auto [p, dp] = detail::legendre(n, x);
      const double dx = p / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const double dp = detail::legendre(n, x).second;
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    g.nodes[i] = -x;
    g.nodes[n - 1 - i] = x;
    g.weights[i] = w;
    g.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) g.nodes[n / 2] = 0.0;
  return g;
}

/// Product rule on the unit sphere: Gauss-Legendre in cos(theta) times uniform trapezoid in phi
/// (order m gives m x 2m nodes; exact for polynomials of degree < 2m).
struct SphereRule {
  std::vector<Vec3> points;
  std::vector<double> weights;  // sum to 4 pi
};

inline SphereRule sphere_rule(std::size_t order) {
  if (order < 6) throw ConfigError("sphere quadrature order must be at least 6");
  const GaussRule g = gauss_legendre(order);
  const std::size_t nphi = 2 * order;
  SphereRule s;
  s.points.reserve(order * nphi);
  s.weights.reserve(order * nphi);
  for (std::size_t i = 0; i < order; ++i) {
    const double c = g.nodes[i];
    const double st = std::sqrt(std::max(0.0, 1.0 - c * c));
    for (std::size_t j = 0; j < nphi; ++j) {
      const double phi = 2.0 * kPi * static_cast<double>(j) / static_cast<double>(nphi);
      s.points.push_back({st * std::cos(phi), st * std::sin(phi), c});
      s.weights.push_back(g.weights[i] * 2.0 * kPi / static_cast<double>(nphi));
    }
  }
  return s;
}

/// Pairwise (tree) summation; the result depends only on the order of the input.
inline double pairwise_sum(std::span<const double> v) {
  if (v.size() <= 8) {
    double s = 0.0;
    for (double x : v) s += x;
    return s;
  }
  const std::size_t half = v.size() / 2;
  return pairwise_sum(v.first(half)) + pairwise_sum(v.subspan(half));
}

}  // namespace ldg
