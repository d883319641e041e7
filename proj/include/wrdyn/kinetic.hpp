// Copyright 2026 The wrdyn Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <vector>

#include "wrdyn/convolution.hpp"
#include "wrdyn/grid.hpp"
#include "wrdyn/kernels.hpp"

namespace wrdyn {

/// Model: dimension, jump kernels a_i and repulsion potentials phi_i, plus the
/// constants derived from them. Build with make_model so the derived fields
/// are consistent.
struct ModelParams {
  int dimension = 1;
  std::array<KernelSpec, 2> jump{};
  std::array<KernelSpec, 2> potential{};

  std::array<double, 2> alpha{};     ///< jump rates, mass of a_i
  std::array<double, 2> phi_mass{};  ///< mass of phi_i
  std::array<double, 2> phi_sup{};   ///< sup of phi_i
  double alpha_max = 0.0;
  double c = 0.0;  ///< max_i mass of phi_i
};

ModelParams make_model(int dimension, const KernelSpec& a0, const KernelSpec& a1, const KernelSpec& phi0,
                       const KernelSpec& phi1);

/// True when the derived constants match the kernels to 1e-14 relative.
bool derived_constants_consistent(const ModelParams& model);

/// Two density fields on a common grid; also used for tendencies and perturbations.
struct DensityPair {
  std::array<Field, 2> rho;

  DensityPair() = default;
  DensityPair(Field rho0, Field rho1);
  static DensityPair constant(const GridSpec& grid, double c0, double c1);

  Field& operator[](int i) { return rho[static_cast<std::size_t>(i)]; }
  const Field& operator[](int i) const { return rho[static_cast<std::size_t>(i)]; }
  const GridSpec& grid() const { return rho[0].grid(); }
};

double sup_distance(const DensityPair& a, const DensityPair& b);

/// Cell-volume weighted totals of each component.
std::array<double, 2> mass_totals(const DensityPair& rho);

/// Right-hand side of the kinetic system on a fixed grid:
///
///   d rho_i / dt = (a_i * rho_i) exp(-phi_i * rho_{1-i}) - rho_i (a_i * exp(-phi_i * rho_{1-i}))
///
/// The convolvers are built once; rhs() is const and reentrant.
class KineticOperator {
 public:
  KineticOperator(const ModelParams& model, const GridSpec& grid,
                  ConvolutionMethod method = ConvolutionMethod::spectral);

  const ModelParams& model() const { return model_; }
  const GridSpec& grid() const { return grid_; }
  const PeriodicConvolver& jump(int i) const { return jump_[static_cast<std::size_t>(i)]; }
  const PeriodicConvolver& potential(int i) const { return potential_[static_cast<std::size_t>(i)]; }

  /// Grid Riemann masses of a_i. These play the role of alpha_i for the
  /// discretized system (a_i * const = discrete alpha_i * const exactly).
  const std::array<double, 2>& discrete_alpha() const { return discrete_alpha_; }

  DensityPair rhs(const DensityPair& rho) const;

  /// Source term of the mild (Duhamel) form with damping exp(-alpha_i t):
  ///   (a_i * rho_i) exp(-phi_i * rho_{1-i}) + rho_i (a_i * [1 - exp(-phi_i * rho_{1-i})])
  DensityPair duhamel_source(const DensityPair& rho) const;

 private:
  void check(const DensityPair& rho) const;

  ModelParams model_;
  GridSpec grid_;
  std::array<PeriodicConvolver, 2> jump_;
  std::array<PeriodicConvolver, 2> potential_;
  std::array<double, 2> discrete_alpha_{};
};

DensityPair kinetic_rhs(const DensityPair& rho, const ModelParams& model);

enum class KineticMethod { rk4, picard };

struct KineticRunConfig {
  double t_end = 1.0;
  double dt = 1e-3;
  KineticMethod method = KineticMethod::rk4;
  double picard_tol = 1e-10;
  int picard_max_iter = 200;
  double snapshot_every = 0.1;
};

void validate(const KineticRunConfig& cfg);

struct TimedDensity {
  double t = 0.0;
  DensityPair rho;
};

using Trajectory = std::vector<TimedDensity>;

/// Result of checking rho_{i,t}(x) <= ||rho_{i,0}||_inf exp(alpha_i t) and positivity.
struct EnvelopeReport {
  static constexpr double kPositivityFloor = -1e-9;
  static constexpr double kRelativeSlack = 1e-6;

  bool passed = true;
  double min_value = 0.0;
  /// Per snapshot and type: bound / max - 1 (infinite for an all-zero field).
  std::vector<std::array<double, 2>> relative_slack;
  /// Smallest value of (bound - value) / bound over all cells.
  double worst_margin = 0.0;
  std::size_t worst_snapshot = 0;
  int worst_type = 0;
  std::size_t worst_cell = 0;
  std::size_t violations = 0;
};

EnvelopeReport apriori_check(const Trajectory& trajectory, const ModelParams& model, const DensityPair& rho0);

struct KineticDiagnostics {
  std::vector<double> times;
  std::vector<std::array<double, 2>> masses;
  std::vector<double> min_values;
  std::size_t clamped = 0;            ///< roundoff negatives in (-1e-12, 0) set to zero
  std::size_t negative_values = 0;    ///< values at or below -1e-12, left in place
  EnvelopeReport envelope;

  // Picard only.
  std::vector<double> window_lengths;
  std::vector<int> iterations;
  double fixed_point_residual = 0.0;  ///< worst over windows, weighted norm
};

struct KineticResult {
  Trajectory trajectory;
  KineticDiagnostics diagnostics;
};

/// Classical RK4 with snapshots at the configured cadence. Throws on NaN or
/// an envelope violation.
KineticResult integrate_rk4(const DensityPair& rho0, const KineticOperator& op, const KineticRunConfig& cfg);

/// One application of the Picard map F to a candidate trajectory given on a
/// uniform time mesh starting at candidate.front().t. The result starts at rho0.
Trajectory picard_apply(const Trajectory& candidate, const KineticOperator& op, const DensityPair& rho0);

/// max_i sup_t ||a_{i,t} - b_{i,t}||_inf exp(-alpha_i (t - t_0)).
double weighted_distance(const Trajectory& a, const Trajectory& b, const std::array<double, 2>& alpha);
double weighted_norm(const Trajectory& a, const std::array<double, 2>& alpha);

/// Largest T with exp(3 alpha T) < 1 + 3 / (2C), the contraction bound.
double picard_contraction_bound(double alpha, double c_bound);
/// First window used by picard_solve: exp(3 alpha T) = 1 + 3 / (4C).
double picard_first_window(double alpha, double c_bound);
/// Continuation window after `elapsed` time: exp(3 alpha T) = 1 + exp(-alpha elapsed) / C.
double picard_next_window(double alpha, double c_bound, double elapsed);

/// Fixed-point construction of the solution, window by window. The mesh step
/// is cfg.dt and windows are rounded down to whole steps, so snapshot times
/// coincide with those of integrate_rk4 for the same cfg.
KineticResult picard_solve(const DensityPair& rho0, const KineticOperator& op, const KineticRunConfig& cfg);

/// Dispatches on cfg.method.
KineticResult solve_kinetic(const DensityPair& rho0, const KineticOperator& op, const KineticRunConfig& cfg);

}  // namespace wrdyn
