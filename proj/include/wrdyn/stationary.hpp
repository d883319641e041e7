// Copyright 2026 The wrdyn Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <optional>
#include <string_view>
#include <vector>

#include "wrdyn/kinetic.hpp"

namespace wrdyn {

enum class Stability { stable, unstable, marginal };

std::string_view to_string(Stability s);

/// Product C0 C1 <phi_0> <phi_1> and its comparison with 1 (ties within 1e-9
/// are marginal).
struct StabilityVerdict {
  Stability classification = Stability::stable;
  double product = 0.0;
};

StabilityVerdict classify_stability(double c0, double c1, const ModelParams& model);

/// Constant solution of the birth-and-death system with its parameters
/// Ctilde_0 = C_0 exp(<phi_0> C_1), Ctilde_1 = C_1 exp(<phi_1> C_0).
struct StationaryPoint {
  double c0 = 0.0;
  double c1 = 0.0;
  double ctilde0 = 0.0;
  double ctilde1 = 0.0;
  double product = 0.0;
  Stability classification = Stability::stable;
};

struct RootScanOptions {
  int scan_points = 10000;
  double tolerance = 1e-12;  ///< relative bracket width at which bisection stops
};

struct RootPair {
  double x = 0.0;
  double y = 0.0;
};

/// Solutions of x e^y = a, y e^x = a. The symmetric root comes first; for
/// a > e the asymmetric root (x1, x3) with x1 < x3 and its mirror follow.
std::vector<RootPair> symmetric_roots(double a, const RootScanOptions& opts = {});

/// All constant stationary points for the given Ctilde parameters, ordered by C1.
std::vector<StationaryPoint> constant_solutions(double ctilde0, double ctilde1, const ModelParams& model,
                                                const RootScanOptions& opts = {});

/// C0 C1 phihat_0(p) phihat_1(p).
double product_hat(double p, double c0, double c1, const ModelParams& model);

/// Smallest p > 0 with product_hat(p) = 1, or nothing when product_hat(0) <= 1.
std::optional<double> critical_wavenumber(double c0, double c1, const ModelParams& model, double tolerance = 1e-10);

/// Linearization of the kinetic system about the constant state (C0, C1) on
/// the Fourier mode with radial wavenumber p:
///
///   M(p) = [[A_0, C_0 phihat_0 A_0], [C_1 phihat_1 A_1, A_1]],
///   A_i  = exp(-<phi_i> C_{1-i}) (ahat_i(p) - alpha_i) <= 0,
///
/// so det M = A_0 A_1 (1 - product_hat(p)). Derivation in docs/linearization.md.
struct DispersionPoint {
  double p = 0.0;
  double product_hat = 0.0;
  std::array<std::array<double, 2>, 2> matrix{};
  /// Real parts of the eigenvalues of M(p), descending.
  std::array<double, 2> growth_rates{};
  double determinant = 0.0;
};

DispersionPoint dispersion_growth(double p, double c0, double c1, const ModelParams& model);

/// Unit-free eigenvector of M(p) for the top eigenvalue (first component 1
/// unless it vanishes). Requires a real spectrum.
std::array<double, 2> top_eigenvector(const DispersionPoint& point);

enum class ResidualKind {
  full,         ///< sup |(a_i * rho_i) e^{-phi_i * rho_{1-i}} - rho_i (a_i * e^{-phi_i * rho_{1-i}})|
  birth_death,  ///< sup |rho_i - Ctilde_i e^{-phi_i * rho_{1-i}}|
};

std::array<double, 2> stationary_residual(const DensityPair& rho, const KineticOperator& op, ResidualKind which,
                                          std::optional<std::array<double, 2>> ctilde = std::nullopt);

/// rho -> (Ctilde_0 e^{-phi_0 * rho_1}, Ctilde_1 e^{-phi_1 * rho_0}).
DensityPair birth_death_map(const DensityPair& rho, const std::array<double, 2>& ctilde, const KineticOperator& op);

/// Perturbation map (C_0 [e^{-phi_0 * eps_1} - 1], C_1 [e^{-phi_1 * eps_0} - 1]).
DensityPair perturbation_map(const DensityPair& eps, double c0, double c1, const KineticOperator& op);

/// Its Frechet derivative at zero: (-C_0 phi_0 * eps_1, -C_1 phi_1 * eps_0).
DensityPair frechet_apply(const DensityPair& eps, double c0, double c1, const KineticOperator& op);

}  // namespace wrdyn
