#pragma once

// Gradient-flow relaxation of the reduced Euler-Lagrange system
//
//   Delta Q = -Q - (3 sqrt6 h_+/t)(Q^2 - |Q|^2 I/3) + (2 h_+^2/t) |Q|^2 Q
//
// on the ball with radial Dirichlet data. Explicit Euler on the 7-point Laplacian; the
// update is the exact gradient step of the lattice energy
//   E = dx^3 [ sum_{edges touching an interior node} |Q_a - Q_b|^2 / (2 dx^2) + sum_interior f(Q) ],
// which is monitored for monotone decrease.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <string>
#include <thread>
#include <vector>

#include "ldg/energy.hpp"
#include "ldg/error.hpp"
#include "ldg/fields.hpp"
#include "ldg/material.hpp"
#include "ldg/quadrature.hpp"

namespace ldg {

/// dF/dQ of the reduced bulk density (traceless by construction).
inline QTensor el_rhs(const QTensor& q, const ReducedParams& rp) {
  const double n2 = norm_sq(q);
  return (-1.0 + 2.0 * rp.h_plus * rp.h_plus / rp.t * n2) * q - 3.0 * kSqrt6 * rp.h_plus / rp.t * traceless_square(q);
}

/// Right-hand side of the uniaxial reduction: (|Q|^2 - 1) Q + (3h_+/t)(|Q|^2 - |Q|) Q.
inline QTensor uniaxial_rhs(const QTensor& q, const ReducedParams& rp) {
  const double n2 = norm_sq(q);
  return ((n2 - 1.0) + rp.cubic_weight() * (n2 - std::sqrt(n2))) * q;
}

/// Largest |L h(r_i) M - el_rhs(H)| over profile nodes r_i (excluding the prescribed last
/// node) and the given directions, where H is the assembled hedgehog field, M its angular
/// part and L h = h'' + 2h'/r - 6h/r^2 the radial operator evaluated with the three-point
/// stencil on the field's own amplitudes |H| at neighbouring nodes.
inline double radial_reduction_residual(const RadialProfile& p, const ReducedParams& rp, const std::vector<Vec3>& directions) {
  double m = 0.0;
  for (const Vec3& n : directions) {
    const auto amplitude = [&](double r) { return norm(hedgehog_field(p, r * n)); };
    for (std::size_t i = 0; i + 1 < p.size(); ++i) {
      const double rm = i == 0 ? 0.0 : p.r[i - 1];
      const double hm = i == 0 ? 0.0 : amplitude(rm);
      const double h0 = amplitude(p.r[i]), hp = amplitude(p.r[i + 1]);
      const detail::Stencil st = detail::stencil(p.r[i] - rm, p.r[i + 1] - p.r[i]);
      const double d1 = st.d1m * hm + st.d10 * h0 + st.d1p * hp;
      const double d2 = st.d2m * hm + st.d20 * h0 + st.d2p * hp;
      const double lh = d2 + 2.0 * d1 / p.r[i] - 6.0 * h0 / (p.r[i] * p.r[i]);
      const QTensor H = hedgehog_field(p, p.r[i] * n);
      m = std::max(m, norm(lh * from_uniaxial(1.0, n) - el_rhs(H, rp)));
    }
  }
  return m;
}

enum class RelaxInit { hedgehog, perturbed_hedgehog, frozen_boundary_extension };

inline std::string to_string(RelaxInit i) {
  switch (i) {
    case RelaxInit::hedgehog: return "hedgehog";
    case RelaxInit::perturbed_hedgehog: return "perturbed_hedgehog";
    case RelaxInit::frozen_boundary_extension: return "frozen_boundary_extension";
  }
  return "unknown";
}

inline RelaxInit relax_init_from_string(const std::string& s) {
  if (s == "hedgehog") return RelaxInit::hedgehog;
  if (s == "perturbed_hedgehog") return RelaxInit::perturbed_hedgehog;
  if (s == "frozen_boundary_extension") return RelaxInit::frozen_boundary_extension;
  throw ConfigError("unknown relax init '" + s + "'");
}

struct RelaxConfig {
  double t = 1e4;
  double R = 40.0;
  int grid_n = 65;
  double dt_factor = 1.0 / 7.0;  // dt = dt_factor * dx^2 (capped by the bulk stiffness)
  long max_steps = 100000;
  double tol = 1e-8;  // stop once sup |update| < tol
  RelaxInit init = RelaxInit::hedgehog;
  int threads = 1;
  int energy_every = 10;     // dissipation check cadence (steps)
  long checkpoint_every = 0;  // 0 disables checkpoint callbacks

  void validate() const {
    if (grid_n < 33 || grid_n % 2 == 0) throw ConfigError("relax: grid_n must be odd and at least 33");
    if (!(dt_factor > 0.0) || dt_factor > 1.0 / 6.0) throw ConfigError("relax: need 0 < dt_factor <= 1/6");
    if (max_steps < 0) throw ConfigError("relax: max_steps must be nonnegative");
    if (!(tol > 0.0)) throw ConfigError("relax: tol must be positive");
    if (threads < 1) throw ConfigError("relax: threads must be positive");
    if (energy_every < 1) throw ConfigError("relax: energy_every must be positive");
  }
};

struct RelaxResult {
  BallField field;
  long steps = 0;
  bool converged = false;
  double dt = 0.0;
  double final_update = 0.0;    // sup-norm of the last update
  double final_residual = 0.0;  // sup-norm of Delta Q - el_rhs(Q)
  double initial_flow_energy = 0.0;
  double final_flow_energy = 0.0;
  double max_norm = 0.0;                 // max |Q| over nodes at the end
  double max_norm_after_transient = 0.0;  // max |Q| over checks after step 100
  EnergyBreakdown energy;
};

/// Called with the current field, the completed step count and the lattice energy.
using CheckpointHook = std::function<void(const BallField&, long, double)>;

namespace detail {

struct Lattice {
  std::vector<std::size_t> interior;
  std::array<std::ptrdiff_t, 3> stride{};
};

inline Lattice interior_lattice(const BallField& f) {
  Lattice l;
  for (std::size_t id = 0; id < f.size(); ++id)
    if (f.mask[id] == NodeKind::interior) l.interior.push_back(id);
  const auto n = static_cast<std::ptrdiff_t>(f.n);
  l.stride = {n * n, n, 1};
  return l;
}

inline QTensor laplacian_at(const std::vector<QTensor>& v, std::size_t id, const Lattice& l, double inv_dx2) {
  QTensor s = -6.0 * v[id];
  for (const auto st : l.stride) {
    s += v[id + st];
    s += v[id - st];
  }
  return inv_dx2 * s;
}

// Runs body(begin, end, chunk) over contiguous chunks of [0, count) on `threads` threads.
template <class Body>
void parallel_chunks(std::size_t count, int threads, Body&& body) {
  const auto nt = static_cast<std::size_t>(std::max(1, threads));
  if (nt == 1 || count < 1024) {
    body(std::size_t{0}, count, std::size_t{0});
    return;
  }
  std::vector<std::thread> pool;
  const std::size_t chunk = (count + nt - 1) / nt;
  for (std::size_t c = 0; c < nt; ++c) {
    const std::size_t b = c * chunk, e = std::min(count, b + chunk);
    if (b >= e) break;
    pool.emplace_back([&, b, e, c] { body(b, e, c); });
  }
  for (auto& th : pool) th.join();
}

inline double lattice_energy(const BallField& f, const Lattice& l, const ReducedParams& rp, int threads) {
  std::vector<double> contrib(l.interior.size());
  const double dx = f.dx;
  parallel_chunks(l.interior.size(), threads, [&](std::size_t b, std::size_t e, std::size_t) {
    for (std::size_t m = b; m < e; ++m) {
      const std::size_t id = l.interior[m];
      const QTensor& q = f.values[id];
      double edges = 0.0;
      for (const auto st : l.stride)
        for (const std::ptrdiff_t nb : {static_cast<std::ptrdiff_t>(id) + st, static_cast<std::ptrdiff_t>(id) - st}) {
          const auto nid = static_cast<std::size_t>(nb);
          const double w = f.mask[nid] == NodeKind::interior ? 0.25 : 0.5;
          edges += w * norm_sq(f.values[nid] - q);
        }
      contrib[m] = dx * edges + dx * dx * dx * bulk_f_reduced(q, rp);
    }
  });
  return pairwise_sum(contrib);
}

inline double max_node_norm(const BallField& f) {
  double m = 0.0;
  for (const auto& q : f.values) m = std::max(m, norm_sq(q));
  return std::sqrt(m);
}

// Upper bound of the bulk Hessian for |Q| <= q_max.
inline double bulk_stiffness(const ReducedParams& rp, double q_max) {
  return std::max(0.0, -1.0 + 6.0 * kSqrt6 * rp.h_plus / rp.t * q_max + 6.0 * rp.h_plus * rp.h_plus / rp.t * q_max * q_max);
}

}  // namespace detail

/// sup over interior nodes with |x| < r_max of |Delta Q - el_rhs(Q)| with the 7-point Laplacian.
inline double residual_field(const BallField& f, const ReducedParams& rp,
                             double r_max = std::numeric_limits<double>::infinity()) {
  const detail::Lattice l = detail::interior_lattice(f);
  const double inv_dx2 = 1.0 / (f.dx * f.dx);
  const auto n = static_cast<std::size_t>(f.n);
  double m = 0.0;
  for (const std::size_t id : l.interior) {
    const Vec3 x = f.position(static_cast<int>(id / (n * n)), static_cast<int>(id / n % n), static_cast<int>(id % n));
    if (norm(x) >= r_max) continue;
    m = std::max(m, norm_sq(detail::laplacian_at(f.values, id, l, inv_dx2) - el_rhs(f.values[id], rp)));
  }
  return std::sqrt(m);
}

/// Explicit time step for a lattice: dt_factor dx^2, reduced if needed so that the
/// stiffest lattice mode (12/dx^2 plus the bulk Hessian bound) stays strictly dissipative.
inline double relax_time_step(const RelaxConfig& cfg, const ReducedParams& rp, double dx, double q_max) {
  const double k = detail::bulk_stiffness(rp, std::max(1.1, q_max));
  return std::min(cfg.dt_factor * dx * dx, 1.8 / (12.0 / (dx * dx) + k));
}

/// Relaxes `start` (whose interior values are the initial state), beginning at step `first_step`.
/// A positive `dt` replaces the computed time step (used when resuming a checkpoint).
inline RelaxResult relax_field(const RelaxConfig& cfg, const ReducedParams& rp, BallField start, long first_step = 0,
                               const CheckpointHook& checkpoint = {}, double dt = 0.0) {
  cfg.validate();
  if (start.n != cfg.grid_n) throw ConfigError("relax: field grid does not match configuration");
  const detail::Lattice lat = detail::interior_lattice(start);
  const double dx = start.dx;
  const double inv_dx2 = 1.0 / (dx * dx);
  if (!(dt > 0.0)) dt = relax_time_step(cfg, rp, dx, detail::max_node_norm(start));

  RelaxResult res;
  res.dt = dt;
  std::vector<QTensor> next = start.values;
  std::vector<double> chunk_max(static_cast<std::size_t>(cfg.threads), 0.0);
  double energy = detail::lattice_energy(start, lat, rp, cfg.threads);
  res.initial_flow_energy = energy;
  long last_check = first_step;
  long step = first_step;
  double update = std::numeric_limits<double>::infinity();

  while (step < cfg.max_steps) {
    std::fill(chunk_max.begin(), chunk_max.end(), 0.0);
    detail::parallel_chunks(lat.interior.size(), cfg.threads, [&](std::size_t b, std::size_t e, std::size_t c) {
      double m = 0.0;
      for (std::size_t k = b; k < e; ++k) {
        const std::size_t id = lat.interior[k];
        const QTensor& q = start.values[id];
        const QTensor du = dt * (detail::laplacian_at(start.values, id, lat, inv_dx2) - el_rhs(q, rp));
        next[id] = q + du;
        m = std::max(m, norm_sq(du));
      }
      chunk_max[c] = m;
    });
    std::swap(start.values, next);
    ++step;
    update = std::sqrt(*std::max_element(chunk_max.begin(), chunk_max.end()));
    if (!std::isfinite(update)) throw DivergenceError("relax: non-finite update at step " + std::to_string(step));

    const bool done = update < cfg.tol;
    if (step % cfg.energy_every == 0 || done || step == cfg.max_steps) {
      const double e = detail::lattice_energy(start, lat, rp, cfg.threads);
      if (!std::isfinite(e)) throw DivergenceError("relax: non-finite energy at step " + std::to_string(step));
      const double allowance = 1e-10 * std::max(1.0, std::abs(energy)) * static_cast<double>(step - last_check);
      if (e > energy + allowance)
        throw InstabilityError("relax: energy increased at step " + std::to_string(step) + " (dt too large)");
      energy = e;
      last_check = step;
      if (step > 100) res.max_norm_after_transient = std::max(res.max_norm_after_transient, detail::max_node_norm(start));
    }
    if (checkpoint && cfg.checkpoint_every > 0 && step % cfg.checkpoint_every == 0) checkpoint(start, step, energy);
    if (done) {
      res.converged = true;
      break;
    }
  }

  res.steps = step;
  res.final_update = update;
  res.final_flow_energy = energy;
  res.final_residual = residual_field(start, rp);
  res.max_norm = detail::max_node_norm(start);
  start.singular_core = false;
  if (start.provenance.rfind("relaxed_from_", 0) != 0) start.provenance = "relaxed_from_" + start.provenance;
  res.energy = field_energy(start, rp);
  res.field = std::move(start);
  return res;
}

/// Initial field for a relaxation run.
inline BallField relax_initial_field(const RelaxConfig& cfg, const RadialProfile& profile) {
  switch (cfg.init) {
    case RelaxInit::hedgehog: return sample_hedgehog(cfg.grid_n, profile);
    case RelaxInit::perturbed_hedgehog: return sample_perturbed_hedgehog(cfg.grid_n, profile);
    case RelaxInit::frozen_boundary_extension: return sample_frozen_boundary(cfg.grid_n, cfg.R, cfg.t);
  }
  throw ConfigError("relax: unknown init");
}

inline RelaxResult relax(const RelaxConfig& cfg, const ReducedParams& rp, const RadialProfile& profile,
                         const CheckpointHook& checkpoint = {}) {
  cfg.validate();
  if (std::abs(profile.R - cfg.R) > 1e-12 * cfg.R) throw ConfigError("relax: profile radius does not match");
  return relax_field(cfg, rp, relax_initial_field(cfg, profile), 0, checkpoint);
}

}  // namespace ldg
