// Copyright 2026 The wrdyn Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "wrdyn/kinetic.hpp"
#include "wrdyn/particles.hpp"

namespace wrdyn {

/// Model with both potentials multiplied by eps in (0, 1]. Jump kernels are
/// unchanged.
ModelParams scale_model(const ModelParams& model, double eps);

struct MesoConfig {
  std::vector<double> epsilons{1.0, 0.5, 0.25, 0.125};
  std::size_t replicas = 50;
  double t_end = 0.5;
  double snapshot_every = 0.1;
  double dt = 1e-3;  ///< kinetic RK4 step
  std::uint64_t seed = 0;
  /// Cap on the expected particle count of one replica at the smallest eps.
  double particle_budget = 1e6;
  /// Histogram cells per axis; must divide the kinetic grid. 0 uses the kinetic grid.
  int histogram_points = 0;
  std::size_t bootstrap_samples = 200;
};

void validate(const MesoConfig& cfg);

/// Per eps: error = max over snapshots, histogram cells and types of
/// |eps * empirical density - kinetic density|, with the kinetic solution
/// averaged over each histogram cell.
struct ScalingReport {
  std::vector<double> epsilons;
  std::vector<double> errors;
  std::vector<double> standard_errors;  ///< bootstrap over replicas
  std::vector<std::size_t> replicas;
  std::vector<double> snapshot_times;
  std::vector<double> mean_particles;  ///< mean initial count per replica
};

/// The physical system at scale eps has potentials eps * phi_i and initial
/// Poisson intensity rho0 / eps; its first correlation function times eps is
/// compared with the kinetic solution of the unscaled model started at rho0.
/// Replica r at ladder position k uses stream (k + 1) * 2^32 + r of cfg.seed.
ScalingReport meso_experiment(const ModelParams& model, const DensityPair& rho0, const MesoConfig& cfg);

}  // namespace wrdyn
