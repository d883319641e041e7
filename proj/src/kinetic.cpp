// Copyright 2026 The wrdyn Authors
// SPDX-License-Identifier: Apache-2.0

#include "wrdyn/kinetic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace wrdyn {

namespace {

constexpr double kClampThreshold = 1e-12;

bool close_rel(double a, double b) { return std::abs(a - b) <= 1e-14 * std::max({1.0, std::abs(a), std::abs(b)}); }

// y = x + s * k, component-wise.
DensityPair axpy(const DensityPair& x, double s, const DensityPair& k) {
  DensityPair y = x;
  for (int i = 0; i < 2; ++i) {
    auto yv = y[i].values();
    auto kv = k[i].values();
    for (std::size_t j = 0; j < yv.size(); ++j) yv[j] += s * kv[j];
  }
  return y;
}

}  // namespace

ModelParams make_model(int dimension, const KernelSpec& a0, const KernelSpec& a1, const KernelSpec& phi0,
                       const KernelSpec& phi1) {
  check_dimension(dimension);
  for (const KernelSpec* k : {&a0, &a1, &phi0, &phi1}) make_kernel(k->family, k->amplitude, k->range);
  ModelParams m;
  m.dimension = dimension;
  m.jump = {a0, a1};
  m.potential = {phi0, phi1};
  for (int i = 0; i < 2; ++i) {
    m.alpha[i] = kernel_mass(m.jump[i], dimension);
    m.phi_mass[i] = kernel_mass(m.potential[i], dimension);
    m.phi_sup[i] = kernel_sup(m.potential[i]);
  }
  m.alpha_max = std::max(m.alpha[0], m.alpha[1]);
  m.c = std::max(m.phi_mass[0], m.phi_mass[1]);
  return m;
}

bool derived_constants_consistent(const ModelParams& m) {
  for (int i = 0; i < 2; ++i) {
    if (!close_rel(m.alpha[i], kernel_mass(m.jump[i], m.dimension))) return false;
    if (!close_rel(m.phi_mass[i], kernel_mass(m.potential[i], m.dimension))) return false;
    if (!close_rel(m.phi_sup[i], kernel_sup(m.potential[i]))) return false;
  }
  return close_rel(m.alpha_max, std::max(m.alpha[0], m.alpha[1])) &&
         close_rel(m.c, std::max(m.phi_mass[0], m.phi_mass[1]));
}

DensityPair::DensityPair(Field rho0, Field rho1) : rho{std::move(rho0), std::move(rho1)} {
  require_same_grid(rho[0].grid(), rho[1].grid(), "DensityPair");
}

DensityPair DensityPair::constant(const GridSpec& grid, double c0, double c1) {
  return DensityPair(Field(grid, c0), Field(grid, c1));
}

double sup_distance(const DensityPair& a, const DensityPair& b) {
  return std::max(sup_distance(a[0], b[0]), sup_distance(a[1], b[1]));
}

std::array<double, 2> mass_totals(const DensityPair& rho) { return {rho[0].integral(), rho[1].integral()}; }

KineticOperator::KineticOperator(const ModelParams& model, const GridSpec& grid, ConvolutionMethod method)
    : model_(model),
      grid_(grid),
      jump_{PeriodicConvolver(grid, model.jump[0], method), PeriodicConvolver(grid, model.jump[1], method)},
      potential_{PeriodicConvolver(grid, model.potential[0], method),
                 PeriodicConvolver(grid, model.potential[1], method)} {
  if (grid.dimension != model.dimension) throw std::invalid_argument("KineticOperator: grid dimension != model dimension");
  discrete_alpha_ = {jump_[0].discrete_mass(), jump_[1].discrete_mass()};
}

void KineticOperator::check(const DensityPair& rho) const {
  require_same_grid(grid_, rho[0].grid(), "kinetic_rhs");
  require_same_grid(grid_, rho[1].grid(), "kinetic_rhs");
}

DensityPair KineticOperator::rhs(const DensityPair& rho) const {
  check(rho);
  const std::size_t n = grid_.cells();
  DensityPair out = DensityPair::constant(grid_, 0.0, 0.0);
  std::vector<double> field(n), spread(n), smoothed(n);
  for (int i = 0; i < 2; ++i) {
    const auto own = rho[i].values();
    potential(i).apply(rho[1 - i].values(), field);
    for (double& v : field) v = std::exp(-v);
    jump(i).apply(own, spread);
    jump(i).apply(field, smoothed);
    auto o = out[i].values();
    for (std::size_t j = 0; j < n; ++j) o[j] = spread[j] * field[j] - own[j] * smoothed[j];
  }
  return out;
}

DensityPair KineticOperator::duhamel_source(const DensityPair& rho) const {
  check(rho);
  const std::size_t n = grid_.cells();
  DensityPair out = DensityPair::constant(grid_, 0.0, 0.0);
  std::vector<double> field(n), spread(n), deficit(n), smoothed(n);
  for (int i = 0; i < 2; ++i) {
    const auto own = rho[i].values();
    potential(i).apply(rho[1 - i].values(), field);
    for (std::size_t j = 0; j < n; ++j) {
      deficit[j] = -std::expm1(-field[j]);
      field[j] = std::exp(-field[j]);
    }
    jump(i).apply(own, spread);
    jump(i).apply(deficit, smoothed);
    auto o = out[i].values();
    for (std::size_t j = 0; j < n; ++j) o[j] = spread[j] * field[j] + own[j] * smoothed[j];
  }
  return out;
}

DensityPair kinetic_rhs(const DensityPair& rho, const ModelParams& model) {
  return KineticOperator(model, rho.grid()).rhs(rho);
}

void validate(const KineticRunConfig& cfg) {
  if (!(cfg.t_end >= 0.0) || !std::isfinite(cfg.t_end)) throw std::invalid_argument("t_end must be nonnegative");
  if (!(cfg.dt > 0.0)) throw std::invalid_argument("dt must be positive");
  if (!(cfg.snapshot_every > 0.0)) throw std::invalid_argument("snapshot_every must be positive");
  if (!(cfg.picard_tol > 0.0)) throw std::invalid_argument("picard_tol must be positive");
  if (cfg.picard_max_iter <= 0) throw std::invalid_argument("picard_max_iter must be positive");
  if (cfg.t_end > 0.0 && (cfg.dt > cfg.snapshot_every * (1 + 1e-12) || cfg.snapshot_every > cfg.t_end * (1 + 1e-12)))
    throw std::invalid_argument("require dt <= snapshot_every <= t_end");
}

EnvelopeReport apriori_check(const Trajectory& trajectory, const ModelParams& model, const DensityPair& rho0) {
  EnvelopeReport r;
  r.worst_margin = std::numeric_limits<double>::infinity();
  r.min_value = std::numeric_limits<double>::infinity();
  const std::array<double, 2> initial_sup{rho0[0].sup_norm(), rho0[1].sup_norm()};
  for (std::size_t s = 0; s < trajectory.size(); ++s) {
    const auto& snap = trajectory[s];
    std::array<double, 2> slack{};
    for (int i = 0; i < 2; ++i) {
      const double bound = initial_sup[static_cast<std::size_t>(i)] * std::exp(model.alpha[static_cast<std::size_t>(i)] * snap.t);
      const Field& f = snap.rho[i];
      double fmax = -std::numeric_limits<double>::infinity();
      for (std::size_t j = 0; j < f.size(); ++j) {
        const double v = f[j];
        r.min_value = std::min(r.min_value, v);
        fmax = std::max(fmax, v);
        const bool too_big = v > bound * (1.0 + EnvelopeReport::kRelativeSlack);
        if (too_big || v < EnvelopeReport::kPositivityFloor || !std::isfinite(v)) ++r.violations;
        const double margin = bound > 0.0 ? (bound - v) / bound : (v <= 0.0 ? 0.0 : -std::numeric_limits<double>::infinity());
        if (margin < r.worst_margin) {
          r.worst_margin = margin;
          r.worst_snapshot = s;
          r.worst_type = i;
          r.worst_cell = j;
        }
      }
      slack[static_cast<std::size_t>(i)] = fmax > 0.0 ? bound / fmax - 1.0 : std::numeric_limits<double>::infinity();
    }
    r.relative_slack.push_back(slack);
  }
  if (trajectory.empty()) {
    r.min_value = 0.0;
    r.worst_margin = 0.0;
  }
  r.passed = r.violations == 0;
  return r;
}

namespace {

void record(KineticDiagnostics& d, const TimedDensity& snap) {
  d.times.push_back(snap.t);
  d.masses.push_back(mass_totals(snap.rho));
  d.min_values.push_back(std::min(snap.rho[0].min(), snap.rho[1].min()));
}

// Clamps roundoff negatives; returns true if a non-finite value is present.
bool sanitize(DensityPair& rho, KineticDiagnostics& d) {
  for (int i = 0; i < 2; ++i) {
    for (double& v : rho[i].values()) {
      if (!std::isfinite(v)) return true;
      if (v < 0.0) {
        if (v > -kClampThreshold) {
          v = 0.0;
          ++d.clamped;
        } else {
          ++d.negative_values;
        }
      }
    }
  }
  return false;
}

}  // namespace

KineticResult integrate_rk4(const DensityPair& rho0, const KineticOperator& op, const KineticRunConfig& cfg) {
  validate(cfg);
  if (op.model().alpha_max > 0.0 && cfg.dt > 0.1 / op.model().alpha_max * (1 + 1e-12)) {
    std::ostringstream msg;
    msg << "integrate_rk4: dt = " << cfg.dt << " exceeds the stability limit 0.1/alpha = " << 0.1 / op.model().alpha_max;
    throw std::invalid_argument(msg.str());
  }
  KineticResult result;
  auto& diag = result.diagnostics;
  DensityPair state = rho0;
  result.trajectory.push_back({0.0, state});
  record(diag, result.trajectory.back());

  if (cfg.t_end > 0.0) {
    const auto steps = static_cast<long>(std::ceil(cfg.t_end / cfg.dt - 1e-9));
    const double h = cfg.t_end / static_cast<double>(steps);
    const long stride = std::max(1L, std::lround(cfg.snapshot_every / h));
    for (long k = 1; k <= steps; ++k) {
      const DensityPair k1 = op.rhs(state);
      const DensityPair k2 = op.rhs(axpy(state, 0.5 * h, k1));
      const DensityPair k3 = op.rhs(axpy(state, 0.5 * h, k2));
      const DensityPair k4 = op.rhs(axpy(state, h, k3));
      for (int i = 0; i < 2; ++i) {
        auto s = state[i].values();
        auto v1 = k1[i].values(), v2 = k2[i].values(), v3 = k3[i].values(), v4 = k4[i].values();
        for (std::size_t j = 0; j < s.size(); ++j) s[j] += h / 6.0 * (v1[j] + 2.0 * v2[j] + 2.0 * v3[j] + v4[j]);
      }
      if (sanitize(state, diag)) throw std::runtime_error("integrate_rk4: non-finite value at step " + std::to_string(k));
      if (k % stride == 0 || k == steps) {
        result.trajectory.push_back({k == steps ? cfg.t_end : static_cast<double>(k) * h, state});
        record(diag, result.trajectory.back());
      }
    }
  }

  diag.envelope = apriori_check(result.trajectory, op.model(), rho0);
  if (!diag.envelope.passed) {
    std::ostringstream msg;
    msg << "integrate_rk4: a-priori envelope violated (worst margin " << diag.envelope.worst_margin << " at t = "
        << result.trajectory[diag.envelope.worst_snapshot].t << ")";
    throw std::runtime_error(msg.str());
  }
  return result;
}

KineticResult solve_kinetic(const DensityPair& rho0, const KineticOperator& op, const KineticRunConfig& cfg) {
  return cfg.method == KineticMethod::rk4 ? integrate_rk4(rho0, op, cfg) : picard_solve(rho0, op, cfg);
}

}  // namespace wrdyn
