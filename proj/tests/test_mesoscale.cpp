// Copyright 2026 The wrdyn Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "oracles.hpp"
#include "wrdyn/mesoscale.hpp"

using namespace wrdyn;

namespace {

ModelParams model(double phi_amp = 1.5) {
  const auto a = make_kernel(KernelFamily::gaussian, 1.0 / std::sqrt(2.0 * std::numbers::pi), 1.0);
  return make_model(1, a, a, make_kernel(KernelFamily::tophat, phi_amp, 0.5), make_kernel(KernelFamily::tophat, phi_amp, 0.5));
}

}  // namespace

TEST_CASE("scale_model") {
  const ModelParams m = model(2.0);
  const ModelParams same = scale_model(m, 1.0);
  CHECK(same.potential == m.potential);
  CHECK(same.phi_mass == m.phi_mass);
  const ModelParams half = scale_model(m, 0.5);
  CHECK(half.potential[0].amplitude == 1.0);
  CHECK(half.phi_mass[0] == doctest::Approx(0.5 * m.phi_mass[0]).epsilon(1e-15));
  CHECK(half.phi_sup[1] == 0.5 * m.phi_sup[1]);
  CHECK(half.jump == m.jump);
  CHECK(half.alpha == m.alpha);
  CHECK(derived_constants_consistent(half));
  const ModelParams ab = scale_model(scale_model(m, 0.5), 0.25);
  const ModelParams prod = scale_model(m, 0.125);
  CHECK(ab.potential == prod.potential);
  CHECK(ab.phi_mass[0] == doctest::Approx(prod.phi_mass[0]).epsilon(1e-15));
  CHECK_THROWS_AS(scale_model(m, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(scale_model(m, 1.5), std::invalid_argument);
}

TEST_CASE("without interaction the rescaled density follows the linear solution") {
  const ModelParams m = model(0.0);
  const auto g = make_grid(1, 10.0, 40);
  const auto coarse = make_grid(1, 10.0, 10);
  const DensityPair rho0(oracle::cosine(g, 1, 0.5, 1.0), oracle::cosine(g, 2, 0.3, 0.8));
  KineticRunConfig kcfg;
  kcfg.t_end = 0.5;
  kcfg.dt = 1e-3;
  const auto kin = integrate_rk4(rho0, KineticOperator(m, g), kcfg);
  for (double eps : {1.0, 0.25}) {
    const ConfigFactory init = [&](RandomStream& r) { return init_poisson_field(rho0, 1.0 / eps, r); };
    const std::size_t reps = 200;
    const auto runs = simulate_ensemble(init, scale_model(m, eps), 0.5, 0.1, 3, reps);
    const auto times = snapshot_times(0.5, 0.1);
    double worst_z = 0.0;
    for (std::size_t s = 0; s < times.size(); ++s) {
      std::vector<DensityPair> per;
      for (const auto& r : runs) per.push_back(empirical_density(std::span<const ParticleConfig>(&r.snapshots[s], 1), coarse));
      for (int t = 0; t < 2; ++t) {
        // Cell average of the kinetic solution.
        std::vector<double> ref(coarse.cells(), 0.0);
        for (std::size_t j = 0; j < g.cells(); ++j) ref[j / 4] += 0.25 * kin.trajectory[s].rho[t][j];
        for (std::size_t c = 0; c < coarse.cells(); ++c) {
          double mean = 0.0;
          double sq = 0.0;
          for (const auto& p : per) {
            mean += eps * p[t][c];
            sq += eps * eps * p[t][c] * p[t][c];
          }
          mean /= reps;
          const double se = std::sqrt((sq / reps - mean * mean) / (reps - 1));
          worst_z = std::max(worst_z, std::abs(mean - ref[c]) / se);
        }
      }
    }
    CHECK(worst_z < 4.5);
  }
}

TEST_CASE("stationary constant data leaves only sampling noise") {
  const ModelParams m = model(1.0);
  const auto g = make_grid(1, 10.0, 20);
  const DensityPair rho0 = DensityPair::constant(g, 1.0, 1.0);
  MesoConfig cfg;
  cfg.epsilons = {0.5};
  cfg.t_end = 0.4;
  cfg.snapshot_every = 0.2;
  cfg.histogram_points = 5;
  cfg.bootstrap_samples = 50;
  std::vector<double> errs;
  const std::vector<std::size_t> reps{16, 64, 256};
  for (std::size_t r : reps) {
    cfg.replicas = r;
    const auto rep = meso_experiment(m, rho0, cfg);
    REQUIRE(rep.errors.size() == 1);
    CHECK(rep.errors[0] >= 0.0);
    CHECK(rep.standard_errors[0] > 0.0);
    errs.push_back(rep.errors[0]);
  }
  const double slope = std::log(errs[2] / errs[0]) / std::log(256.0 / 16.0);
  CHECK(slope == doctest::Approx(-0.5).epsilon(0.5));
}

TEST_CASE("meso_experiment validation") {
  const ModelParams m = model();
  const auto g = make_grid(1, 10.0, 20);
  const DensityPair rho0 = DensityPair::constant(g, 1.0, 1.0);
  MesoConfig cfg;
  cfg.particle_budget = 100.0;
  CHECK_THROWS_AS(meso_experiment(m, rho0, cfg), std::invalid_argument);
  cfg = {};
  cfg.histogram_points = 3;
  CHECK_THROWS_AS(meso_experiment(m, rho0, cfg), std::invalid_argument);
  cfg = {};
  cfg.epsilons = {0.5, 1.0};
  CHECK_THROWS_AS(validate(cfg), std::invalid_argument);
  cfg = {};
  const auto g2 = make_grid(2, 10.0, 8);
  CHECK_THROWS_AS(meso_experiment(m, DensityPair::constant(g2, 1.0, 1.0), cfg), std::invalid_argument);
}
