// Copyright 2026 The wrdyn Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "oracles.hpp"
#include "wrdyn/kinetic.hpp"

using namespace wrdyn;

namespace {

ModelParams model() {
  return make_model(1, make_kernel(KernelFamily::gaussian, 1.0 / std::sqrt(2.0 * std::numbers::pi), 1.0),
                    make_kernel(KernelFamily::exponential, 0.8, 0.5), make_kernel(KernelFamily::tophat, 0.5, 0.8),
                    make_kernel(KernelFamily::gaussian, 0.9, 0.6));
}

DensityPair smooth_pair(const GridSpec& g, std::uint64_t seed) {
  RandomStream rng(seed);
  Field a = oracle::smooth_field(g, 1.2, rng);
  Field b = oracle::smooth_field(g, 0.9, rng);
  return DensityPair(std::move(a), std::move(b));
}

}  // namespace

TEST_CASE("window formulas") {
  CHECK(picard_contraction_bound(1.0, 1.0) == doctest::Approx(std::log(2.5) / 3.0).epsilon(1e-15));
  CHECK(picard_contraction_bound(1.0, 1.0) == doctest::Approx(0.30543).epsilon(1e-5));
  CHECK(picard_first_window(1.0, 1.0) == doctest::Approx(std::log(1.75) / 3.0));
  CHECK(picard_first_window(2.0, 3.0) < picard_contraction_bound(2.0, 3.0));
  CHECK(picard_next_window(1.0, 2.0, 0.0) == doctest::Approx(std::log(1.5) / 3.0));
  CHECK(picard_next_window(1.0, 2.0, 1.0) < picard_next_window(1.0, 2.0, 0.5));
}

TEST_CASE("weighted norm uses exp(-alpha_i t)") {
  const auto g = make_grid(1, 5.0, 8);
  Trajectory tr{{0.0, DensityPair::constant(g, 1.0, 0.5)}, {1.0, DensityPair::constant(g, 3.0, 0.5)}};
  CHECK(weighted_norm(tr, {1.0, 1.0}) == doctest::Approx(3.0 / std::numbers::e));
  CHECK(weighted_norm(tr, {2.0, 0.0}) == doctest::Approx(1.0));
}

TEST_CASE("constant data is a fixed point after one iteration") {
  const auto g = make_grid(1, 10.0, 64);
  const KineticOperator op(model(), g);
  KineticRunConfig cfg;
  cfg.t_end = 0.5;
  cfg.dt = 1e-2;
  cfg.snapshot_every = 0.1;
  cfg.method = KineticMethod::picard;
  const DensityPair c = DensityPair::constant(g, 1.5, 0.7);
  const auto res = picard_solve(c, op, cfg);
  for (int it : res.diagnostics.iterations) CHECK(it == 1);
  for (const auto& s : res.trajectory) CHECK(sup_distance(s.rho, c) < 1e-12);
  CHECK(res.trajectory.size() == 6);
}

TEST_CASE("picard_apply preserves positivity and the exponential bound") {
  const auto g = make_grid(1, 10.0, 64);
  const KineticOperator op(model(), g);
  const auto& alpha = op.discrete_alpha();
  RandomStream rng(9);
  const double c_bound = 2.0;
  const DensityPair rho0 = DensityPair::constant(g, c_bound, c_bound);
  Trajectory cand;
  const double h = 0.01;
  for (int k = 0; k <= 30; ++k) {
    const double t = k * h;
    DensityPair p = DensityPair::constant(g, 0.0, 0.0);
    for (int i = 0; i < 2; ++i)
      for (std::size_t j = 0; j < g.cells(); ++j)
        p[i][j] = c_bound * std::exp(alpha[static_cast<std::size_t>(i)] * t) * rng.uniform();
    cand.push_back({t, p});
  }
  CHECK(weighted_norm(cand, alpha) <= c_bound);
  const Trajectory out = picard_apply(cand, op, rho0);
  CHECK(sup_distance(out.front().rho, rho0) == 0.0);
  for (const auto& s : out) {
    for (int i = 0; i < 2; ++i) {
      CHECK(s.rho[i].min() >= 0.0);
      CHECK(s.rho[i].max() <= c_bound * std::exp(alpha[static_cast<std::size_t>(i)] * s.t) * (1.0 + 1e-6));
    }
  }
}

TEST_CASE("a converged trajectory is a fixed point up to quadrature error") {
  const auto g = make_grid(1, 10.0, 64);
  const KineticOperator op(model(), g);
  const DensityPair rho0 = smooth_pair(g, 4);
  KineticRunConfig cfg;
  cfg.t_end = 0.2;
  auto gap = [&](double dt) {
    cfg.dt = dt;
    cfg.snapshot_every = dt;
    const auto exact = integrate_rk4(rho0, op, cfg).trajectory;
    return weighted_distance(picard_apply(exact, op, rho0), exact, op.discrete_alpha());
  };
  const double g1 = gap(0.02);
  const double g2 = gap(0.01);
  CHECK(g1 < 1e-4);
  CHECK(g1 / g2 == doctest::Approx(4.0).epsilon(0.2));
}

TEST_CASE("picard_solve matches RK4") {
  const auto g = make_grid(1, 10.0, 64);
  const KineticOperator op(model(), g);
  KineticRunConfig cfg;
  cfg.t_end = 0.5;
  cfg.dt = 1e-3;
  cfg.snapshot_every = 0.05;
  for (std::uint64_t seed : {1u, 2u}) {
    const DensityPair rho0 = smooth_pair(g, seed);
    cfg.method = KineticMethod::rk4;
    const auto a = solve_kinetic(rho0, op, cfg);
    cfg.method = KineticMethod::picard;
    const auto b = solve_kinetic(rho0, op, cfg);
    REQUIRE(a.trajectory.size() == b.trajectory.size());
    for (std::size_t s = 0; s < a.trajectory.size(); ++s) {
      CHECK(a.trajectory[s].t == doctest::Approx(b.trajectory[s].t).epsilon(1e-12));
      CHECK(sup_distance(a.trajectory[s].rho, b.trajectory[s].rho) < 1e-5);
    }
    CHECK(b.diagnostics.fixed_point_residual <= 10 * cfg.picard_tol);
    CHECK(b.diagnostics.envelope.passed);
    CHECK(b.diagnostics.window_lengths.size() >= 2);
    const auto m0 = mass_totals(rho0);
    const auto m1 = mass_totals(b.trajectory.back().rho);
    CHECK(std::abs(m1[0] - m0[0]) / m0[0] < 1e-4);
    CHECK(std::abs(m1[1] - m0[1]) / m0[1] < 1e-4);
  }
}

TEST_CASE("picard errors") {
  const auto g = make_grid(1, 10.0, 16);
  const KineticOperator op(model(), g);
  const DensityPair c = DensityPair::constant(g, 1.0, 1.0);
  Trajectory uneven{{0.0, c}, {0.1, c}, {0.3, c}};
  CHECK_THROWS_AS(picard_apply(uneven, op, c), std::invalid_argument);
  CHECK_THROWS_AS(picard_apply(Trajectory{{0.0, c}}, op, c), std::invalid_argument);
  const auto other = make_grid(1, 10.0, 32);
  Trajectory wrong{{0.0, DensityPair::constant(other, 1, 1)}, {0.1, DensityPair::constant(other, 1, 1)}};
  CHECK_THROWS_AS(picard_apply(wrong, op, c), std::invalid_argument);

  KineticRunConfig cfg;
  cfg.t_end = 0.2;
  cfg.dt = 0.01;
  cfg.picard_max_iter = 2;
  cfg.picard_tol = 1e-14;
  cfg.method = KineticMethod::picard;
  CHECK_THROWS_AS(picard_solve(smooth_pair(g, 3), op, cfg), std::runtime_error);
}
