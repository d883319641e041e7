// Copyright 2026 The wrdyn Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "oracles.hpp"
#include "wrdyn/particles.hpp"

using namespace wrdyn;

namespace {

ModelParams free_model(int d = 1) {
  const auto a = make_kernel(KernelFamily::gaussian, 1.0 / std::sqrt(2.0 * std::numbers::pi) / 0.5, 0.5);
  const auto z = make_kernel(KernelFamily::tophat, 0.0, 1.0);
  return make_model(d, a, a, z, z);
}

ModelParams repulsive_model(int d = 1) {
  const auto a0 = make_kernel(KernelFamily::tophat, d == 1 ? 0.5 : 1.0 / std::numbers::pi, 1.0);
  const auto a1 = make_kernel(KernelFamily::exponential, d == 1 ? 1.0 : 1.0 / (2.0 * std::numbers::pi * 0.25), 0.5);
  return make_model(d, a0, a1, make_kernel(KernelFamily::gaussian, 1.2, 0.4), make_kernel(KernelFamily::tophat, 0.7, 0.6));
}

bool same(const ParticleConfig& a, const ParticleConfig& b) {
  return a.points == b.points && a.sim_time == b.sim_time && a.box_length == b.box_length && a.dimension == b.dimension;
}

}  // namespace

TEST_CASE("init_poisson") {
  RandomStream rng(1);
  const auto empty = init_poisson(10.0, 1, 0.0, 2.0, rng);
  CHECK(empty.count(0) == 0);
  CHECK(empty.count(1) > 0);
  CHECK_THROWS_AS(init_poisson(10.0, 1, -1.0, 2.0, rng), std::invalid_argument);

  const int n = 1000;
  double sum = 0.0;
  double sq = 0.0;
  for (int r = 0; r < n; ++r) {
    const auto c = init_poisson(10.0, 1, 5.0, 0.0, rng);
    for (const auto& p : c.points[0]) {
      CHECK(p[0] >= 0.0);
      CHECK(p[0] < 10.0);
    }
    sum += static_cast<double>(c.count(0));
    sq += static_cast<double>(c.count(0)) * static_cast<double>(c.count(0));
  }
  const double mean = sum / n;
  const double var = (sq - n * mean * mean) / (n - 1);
  CHECK(std::abs(mean - 50.0) < 3.0 * std::sqrt(50.0 / n));
  CHECK(var / mean == doctest::Approx(1.0).epsilon(0.1));
}

TEST_CASE("free jumps are always accepted") {
  RandomStream rng(2);
  ParticleConfig c = init_poisson(10.0, 1, 1.0, 1.0, rng);
  for (int k = 0; k < 200; ++k) {
    const auto ev = event_step(c, free_model(), rng);
    CHECK(ev.accepted);
    CHECK(ev.acceptance == 1.0);
  }
  ParticleConfig none;
  none.box_length = 5.0;
  CHECK_THROWS_AS(event_step(none, free_model(), rng), std::invalid_argument);
}

TEST_CASE("one-term acceptance") {
  const ModelParams m = repulsive_model();
  ParticleConfig c;
  c.box_length = 10.0;
  c.points[0] = {{2.0, 0.0}};
  c.points[1] = {{9.7, 0.0}};
  const JumpProcess proc(c, m, RandomStream(3));
  for (double y : {0.0, 0.1, 0.5, 9.0, 9.9}) {
    const double r = periodic_distance({y, 0.0}, {9.7, 0.0}, 10.0, 1);
    CHECK(proc.acceptance_probability(0, {y, 0.0}) == doctest::Approx(std::exp(-kernel_eval(m.potential[0], r))).epsilon(1e-15));
  }
}

TEST_CASE("CellIndex sums equal brute force exactly") {
  RandomStream rng(4);
  for (int d = 1; d <= 2; ++d) {
    for (const auto& phi : {make_kernel(KernelFamily::tophat, 0.7, 0.6), make_kernel(KernelFamily::gaussian, 1.2, 0.4),
                            make_kernel(KernelFamily::exponential, 0.5, 0.3)}) {
      for (int trial = 0; trial < 1000 / 3 + 1; ++trial) {
        const double box = d == 1 ? 12.0 : 6.0;
        const auto c = init_poisson(box, d, 3.0, 0.0, rng);
        const double cut = interaction_cutoff(phi, box, d);
        CellIndex idx(box, d, cut);
        idx.build(c.points[0]);
        const Vec y{box * rng.uniform(), d == 2 ? box * rng.uniform() : 0.0};
        CHECK(idx.interaction_sum(y, c.points[0], phi) == brute_force_interaction(y, c.points[0], phi, box, d, cut));
      }
    }
  }
}

TEST_CASE("CellIndex stays consistent under moves") {
  RandomStream rng(5);
  const auto phi = make_kernel(KernelFamily::tophat, 1.0, 0.8);
  auto c = init_poisson(10.0, 2, 2.0, 0.0, rng);
  CellIndex idx(10.0, 2, 0.8);
  idx.build(c.points[0]);
  for (int k = 0; k < 500; ++k) {
    const auto id = static_cast<std::uint32_t>(rng.index(c.points[0].size()));
    c.points[0][id] = {10.0 * rng.uniform(), 10.0 * rng.uniform()};
    idx.move(id, c.points[0][id]);
    const Vec y{10.0 * rng.uniform(), 10.0 * rng.uniform()};
    CHECK(idx.interaction_sum(y, c.points[0], phi) == brute_force_interaction(y, c.points[0], phi, 10.0, 2, 0.8));
  }
  std::size_t total = 0;
  for (std::size_t cell = 0; cell < static_cast<std::size_t>(idx.cells_per_axis() * idx.cells_per_axis()); ++cell)
    total += idx.members(cell).size();
  CHECK(total == c.points[0].size());
}

TEST_CASE("thinning reproduces the acceptance-weighted destination law") {
  // Type 0 at x, type 1 fixed at z; each event starts from the same state.
  const double box = 4.0;
  const auto a0 = make_kernel(KernelFamily::tophat, 0.5, 1.0);
  const auto a1 = make_kernel(KernelFamily::tophat, 0.005, 1.0);
  const auto phi0 = make_kernel(KernelFamily::gaussian, 2.0, 0.3);
  const ModelParams m = make_model(1, a0, a1, phi0, make_kernel(KernelFamily::tophat, 0.0, 1.0));
  const double x = 1.0;
  const double z = 1.4;
  ParticleConfig start;
  start.box_length = box;
  start.points[0] = {{x, 0.0}};
  start.points[1] = {{z, 0.0}};

  const int bins = 20;
  std::vector<double> counts(bins, 0.0);
  RandomStream rng(6);
  int accepted = 0;
  while (accepted < 20000) {
    JumpProcess fresh(start, m, rng);
    const auto ev = fresh.step();
    rng = fresh.rng();
    if (ev.type != 0 || !ev.accepted) continue;
    ++accepted;
    const double y = ev.proposal[0];
    counts[static_cast<std::size_t>(std::min(bins - 1, static_cast<int>((y - (x - 1.0)) / 2.0 * bins)))] += 1.0;
  }
  std::vector<double> probs(bins);
  double total = 0.0;
  for (int b = 0; b < bins; ++b) {
    const double lo = x - 1.0 + 2.0 * b / bins;
    probs[static_cast<std::size_t>(b)] = oracle::simpson(
        [&](double y) { return std::exp(-kernel_eval(phi0, std::abs(y - z))); }, lo, lo + 2.0 / bins, 200);
    total += probs[static_cast<std::size_t>(b)];
  }
  for (double& p : probs) p /= total;
  CHECK(oracle::chi2_statistic(counts, probs) < oracle::chi2_critical(bins - 1, 1e-3));
}

TEST_CASE("simulate") {
  const ModelParams m = repulsive_model();
  RandomStream rng(7);
  const auto c0 = init_poisson(10.0, 1, 1.5, 1.0, rng);
  SUBCASE("t_end = 0 returns the initial state") {
    const auto res = simulate(c0, m, 0.0, 0.1, 11);
    REQUIRE(res.snapshots.size() == 1);
    CHECK(same(res.snapshots[0], c0));
    CHECK(res.stats.events() == 0);
  }
  SUBCASE("counts are conserved and snapshots follow the cadence") {
    const auto res = simulate(c0, m, 2.0, 0.25, 11);
    CHECK(res.snapshots.size() == 9);
    for (std::size_t s = 0; s < res.snapshots.size(); ++s) {
      CHECK(res.snapshots[s].count(0) == c0.count(0));
      CHECK(res.snapshots[s].count(1) == c0.count(1));
      CHECK(res.snapshots[s].sim_time == doctest::Approx(0.25 * static_cast<double>(s)));
    }
    CHECK(res.stats.accepted[0] <= res.stats.attempted[0]);
    CHECK(res.stats.acceptance_ratio(1) <= 1.0);
    CHECK(res.stats.events() > 0);
  }
  SUBCASE("fixed seed reproduces bit for bit") {
    const auto a = simulate(c0, m, 3.0, 0.5, 99);
    const auto b = simulate(c0, m, 3.0, 0.5, 99);
    const auto c = simulate(c0, m, 3.0, 0.5, 100);
    REQUIRE(a.snapshots.size() == b.snapshots.size());
    for (std::size_t s = 0; s < a.snapshots.size(); ++s) CHECK(same(a.snapshots[s], b.snapshots[s]));
    CHECK(a.stats.attempted == b.stats.attempted);
    CHECK_FALSE(same(a.snapshots.back(), c.snapshots.back()));
  }
  CHECK(snapshot_times(1.0, 0.3) == std::vector<double>{0.0, 0.3, 0.6, 0.8999999999999999, 1.0});
}

TEST_CASE("parallel and serial ensembles agree") {
  const ModelParams m = repulsive_model(2);
  const ConfigFactory init = [](RandomStream& r) { return init_poisson(5.0, 2, 1.0, 1.0, r); };
  const auto a = simulate_ensemble(init, m, 1.0, 0.5, 5, 8, 3);
  const auto b = reference::simulate_ensemble_serial(init, m, 1.0, 0.5, 5, 8, 3);
  REQUIRE(a.size() == 8);
  for (std::size_t r = 0; r < a.size(); ++r) {
    REQUIRE(a[r].snapshots.size() == b[r].snapshots.size());
    for (std::size_t s = 0; s < a[r].snapshots.size(); ++s) CHECK(same(a[r].snapshots[s], b[r].snapshots[s]));
  }
  CHECK_FALSE(same(a[0].snapshots.back(), a[1].snapshots.back()));
}

TEST_CASE("free dynamics preserves the Poisson law") {
  const ModelParams m = free_model();
  const ConfigFactory init = [](RandomStream& r) { return init_poisson(10.0, 1, 2.0, 2.0, r); };
  const auto runs = simulate_ensemble(init, m, 1.0, 1.0, 17, 1000);
  std::vector<double> xs;
  double sum = 0.0;
  double sq = 0.0;
  for (const auto& r : runs) {
    const auto& last = r.snapshots.back();
    double inside = 0.0;
    for (const auto& p : last.points[0]) {
      if (xs.size() < 5000) xs.push_back(p[0]);
      if (p[0] < 5.0) inside += 1.0;
    }
    sum += inside;
    sq += inside * inside;
  }
  const double n = static_cast<double>(runs.size());
  const double mean = sum / n;
  const double var = (sq - n * mean * mean) / (n - 1);
  CHECK(mean == doctest::Approx(10.0).epsilon(0.05));
  CHECK(var / mean == doctest::Approx(1.0).epsilon(0.15));
  CHECK(oracle::ks_statistic(xs, [](double x) { return x / 10.0; }) < oracle::ks_critical(xs.size(), 1e-3));
}

TEST_CASE("empirical_density") {
  const auto g = make_grid(1, 10.0, 10);
  ParticleConfig c;
  c.box_length = 10.0;
  c.points[0] = {{3.5, 0.0}};
  const auto d = empirical_density(std::span<const ParticleConfig>(&c, 1), g);
  for (std::size_t j = 0; j < g.cells(); ++j) CHECK(d[0][j] == (j == 3 ? 1.0 : 0.0));
  CHECK(d[1].sup_norm() == 0.0);

  RandomStream rng(8);
  std::vector<ParticleConfig> ens;
  double total = 0.0;
  for (int r = 0; r < 1000; ++r) {
    ens.push_back(init_poisson(10.0, 1, 3.0, 1.0, rng));
    total += static_cast<double>(ens.back().count(0));
  }
  const auto e = empirical_density(ens, g);
  CHECK(e[0].integral() == doctest::Approx(total / 1000.0).epsilon(1e-12));
  for (std::size_t j = 0; j < g.cells(); ++j) CHECK(std::abs(e[0][j] - 3.0) < 4.0 * std::sqrt(3.0 / 1000.0));

  const auto other = make_grid(1, 12.0, 10);
  CHECK_THROWS_AS(empirical_density(ens, other), std::invalid_argument);
}

TEST_CASE("sub-Poisson envelope") {
  const ModelParams m = repulsive_model();
  const auto g = make_grid(1, 10.0, 5);
  const double c_bound = 2.0;
  auto final_configs = [&](double intensity, double t) {
    const ConfigFactory init = [intensity](RandomStream& r) { return init_poisson(10.0, 1, intensity, intensity, r); };
    const auto runs = simulate_ensemble(init, m, t, t > 0 ? t : 1.0, 31, 200);
    std::vector<ParticleConfig> out;
    for (const auto& r : runs) out.push_back(r.snapshots.back());
    return out;
  };
  const auto at0 = final_configs(c_bound, 0.0);
  const auto r0 = subpoisson_check(at0, m, c_bound, 0.0, g);
  CHECK(r0.failures_order1 == 0);
  const auto ok = subpoisson_check(final_configs(c_bound, 0.5), m, c_bound, 0.5, g);
  CHECK(ok.passed);
  CHECK(ok.worst_margin_order1 > 0.0);
  CHECK(ok.checks == 2 * 5 + 2 * 15 + 25);
  const auto bad = subpoisson_check(final_configs(2.0 * c_bound, 0.5), m, c_bound, 0.5, g);
  CHECK_FALSE(bad.passed);
  CHECK(bad.failures_order1 > 0);
}
