// Copyright 2026 The wrdyn Authors
// SPDX-License-Identifier: Apache-2.0

// Fixed-point construction of kinetic solutions. On a window [t0, t0 + T]
// the solution is the fixed point of
//
//   F_{i,t} = rho_{i,t0} e^{-alpha_i (t - t0)} + int_{t0}^{t} e^{-alpha_i (t - s)} G_i(rho_s) ds
//
// with G the Duhamel source of KineticOperator. The time integral uses the
// product trapezoidal rule: G is interpolated linearly between mesh points
// and integrated exactly against the exponential weight, which keeps
// constant states exact fixed points.

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "wrdyn/kinetic.hpp"

namespace wrdyn {

namespace {

struct StepWeights {
  double decay;  // e^{-alpha h}
  double left;   // weight of G at the start of the step
  double right;  // weight of G at the end of the step
};

StepWeights step_weights(double alpha, double h) {
  const double z = alpha * h;
  double total_over_h;  // (1 - e^{-z}) / z
  double left_over_h;   // (1 - e^{-z}(1 + z)) / z^2
  if (z < 1e-3) {
    total_over_h = 1.0 - z / 2.0 + z * z / 6.0 - z * z * z / 24.0;
    left_over_h = 0.5 - z / 3.0 + z * z / 8.0 - z * z * z / 30.0;
  } else {
    total_over_h = -std::expm1(-z) / z;
    left_over_h = (1.0 - std::exp(-z) * (1.0 + z)) / (z * z);
  }
  return {std::exp(-z), h * left_over_h, h * (total_over_h - left_over_h)};
}

double mesh_step(const Trajectory& tr) {
  if (tr.size() < 2) throw std::invalid_argument("picard_apply: candidate needs at least two mesh points");
  const double h = tr[1].t - tr[0].t;
  if (!(h > 0.0)) throw std::invalid_argument("picard_apply: mesh must be increasing");
  for (std::size_t k = 1; k < tr.size(); ++k) {
    const double expected = tr[0].t + static_cast<double>(k) * h;
    if (std::abs(tr[k].t - expected) > 1e-9 * std::max(1.0, std::abs(expected)))
      throw std::invalid_argument("picard_apply: candidate mesh is not uniform");
  }
  return h;
}

}  // namespace

double picard_contraction_bound(double alpha, double c_bound) {
  return std::log1p(3.0 / (2.0 * c_bound)) / (3.0 * alpha);
}

double picard_first_window(double alpha, double c_bound) { return std::log1p(3.0 / (4.0 * c_bound)) / (3.0 * alpha); }

double picard_next_window(double alpha, double c_bound, double elapsed) {
  return std::log1p(std::exp(-alpha * elapsed) / c_bound) / (3.0 * alpha);
}

double weighted_distance(const Trajectory& a, const Trajectory& b, const std::array<double, 2>& alpha) {
  if (a.size() != b.size()) throw std::invalid_argument("weighted_distance: mesh mismatch");
  if (a.empty()) return 0.0;
  const double t0 = a.front().t;
  double d = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    if (std::abs(a[k].t - b[k].t) > 1e-12 * std::max(1.0, std::abs(a[k].t)))
      throw std::invalid_argument("weighted_distance: mesh mismatch");
    for (int i = 0; i < 2; ++i) {
      const double w = std::exp(-alpha[static_cast<std::size_t>(i)] * (a[k].t - t0));
      d = std::max(d, sup_distance(a[k].rho[i], b[k].rho[i]) * w);
    }
  }
  return d;
}

double weighted_norm(const Trajectory& a, const std::array<double, 2>& alpha) {
  if (a.empty()) return 0.0;
  const double t0 = a.front().t;
  double d = 0.0;
  for (const auto& snap : a)
    for (int i = 0; i < 2; ++i)
      d = std::max(d, snap.rho[i].sup_norm() * std::exp(-alpha[static_cast<std::size_t>(i)] * (snap.t - t0)));
  return d;
}

Trajectory picard_apply(const Trajectory& candidate, const KineticOperator& op, const DensityPair& rho0) {
  const double h = mesh_step(candidate);
  for (const auto& snap : candidate) {
    require_same_grid(op.grid(), snap.rho[0].grid(), "picard_apply");
    require_same_grid(op.grid(), snap.rho[1].grid(), "picard_apply");
  }
  require_same_grid(op.grid(), rho0.grid(), "picard_apply");

  const auto& alpha = op.discrete_alpha();
  const std::array<StepWeights, 2> w{step_weights(alpha[0], h), step_weights(alpha[1], h)};
  const std::size_t n = op.grid().cells();

  Trajectory out;
  out.reserve(candidate.size());
  out.push_back({candidate.front().t, rho0});

  // Running integral I_k and the source at the previous mesh point.
  DensityPair integral = DensityPair::constant(op.grid(), 0.0, 0.0);
  DensityPair prev_source = op.duhamel_source(candidate.front().rho);
  std::array<double, 2> decay_total{1.0, 1.0};
  for (std::size_t k = 1; k < candidate.size(); ++k) {
    const DensityPair source = op.duhamel_source(candidate[k].rho);
    TimedDensity next{candidate[k].t, rho0};
    for (int i = 0; i < 2; ++i) {
      const auto& wi = w[static_cast<std::size_t>(i)];
      auto& dt = decay_total[static_cast<std::size_t>(i)];
      dt *= wi.decay;
      auto acc = integral[i].values();
      auto g0 = prev_source[i].values();
      auto g1 = source[i].values();
      auto f = next.rho[i].values();
      auto init = rho0[i].values();
      for (std::size_t j = 0; j < n; ++j) {
        acc[j] = wi.decay * acc[j] + wi.left * g0[j] + wi.right * g1[j];
        f[j] = init[j] * dt + acc[j];
      }
    }
    out.push_back(std::move(next));
    prev_source = source;
  }
  return out;
}

KineticResult picard_solve(const DensityPair& rho0, const KineticOperator& op, const KineticRunConfig& cfg) {
  validate(cfg);
  for (int i = 0; i < 2; ++i)
    if (rho0[i].min() < 0.0) throw std::invalid_argument("picard_solve: initial data must be nonnegative");

  KineticResult result;
  auto& diag = result.diagnostics;
  result.trajectory.push_back({0.0, rho0});

  const auto& alpha_i = op.discrete_alpha();
  const double alpha = std::max(alpha_i[0], alpha_i[1]);
  const double c_bound = std::max(rho0[0].sup_norm(), rho0[1].sup_norm());

  if (cfg.t_end > 0.0) {
    const auto steps = static_cast<long>(std::ceil(cfg.t_end / cfg.dt - 1e-9));
    const double h = cfg.t_end / static_cast<double>(steps);
    const long stride = std::max(1L, std::lround(cfg.snapshot_every / h));
    const bool trivial = alpha == 0.0 || c_bound == 0.0;

    DensityPair state = rho0;
    long done = 0;
    while (done < steps) {
      double window = std::numeric_limits<double>::infinity();
      if (!trivial) {
        const double elapsed = static_cast<double>(done) * h;
        window = done == 0 ? picard_first_window(alpha, c_bound) : picard_next_window(alpha, c_bound, elapsed);
      }
      long wsteps = std::isfinite(window) ? static_cast<long>(std::floor(window / h + 1e-9)) : steps;
      wsteps = std::clamp(wsteps, 1L, steps - done);

      Trajectory candidate;
      candidate.reserve(static_cast<std::size_t>(wsteps) + 1);
      for (long k = 0; k <= wsteps; ++k) candidate.push_back({static_cast<double>(done + k) * h, state});

      int iter = 0;
      double diff = std::numeric_limits<double>::infinity();
      while (diff >= cfg.picard_tol) {
        if (iter >= cfg.picard_max_iter) {
          std::ostringstream msg;
          msg << "picard_solve: no convergence in window starting at t = " << static_cast<double>(done) * h
              << " after " << iter << " iterations (last change " << diff << ")";
          throw std::runtime_error(msg.str());
        }
        Trajectory next = picard_apply(candidate, op, state);
        diff = weighted_distance(next, candidate, alpha_i);
        candidate = std::move(next);
        ++iter;
      }
      const double residual = weighted_distance(picard_apply(candidate, op, state), candidate, alpha_i);
      diag.fixed_point_residual = std::max(diag.fixed_point_residual, residual);
      diag.window_lengths.push_back(static_cast<double>(wsteps) * h);
      diag.iterations.push_back(iter);

      for (long k = 1; k <= wsteps; ++k) {
        const long global = done + k;
        if (global % stride == 0 || global == steps) {
          TimedDensity snap = candidate[static_cast<std::size_t>(k)];
          if (global == steps) snap.t = cfg.t_end;
          result.trajectory.push_back(std::move(snap));
        }
      }
      state = candidate.back().rho;
      done += wsteps;
    }
  }

  for (const auto& snap : result.trajectory) {
    diag.times.push_back(snap.t);
    diag.masses.push_back(mass_totals(snap.rho));
    diag.min_values.push_back(std::min(snap.rho[0].min(), snap.rho[1].min()));
  }
  diag.envelope = apriori_check(result.trajectory, op.model(), rho0);
  return result;
}

}  // namespace wrdyn
