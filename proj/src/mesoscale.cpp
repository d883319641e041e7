// Copyright 2026 The wrdyn Authors
// SPDX-License-Identifier: Apache-2.0

#include "wrdyn/mesoscale.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace wrdyn {

ModelParams scale_model(const ModelParams& model, double eps) {
  if (!(eps > 0.0 && eps <= 1.0)) throw std::invalid_argument("scale_model: eps must lie in (0, 1]");
  KernelSpec phi0 = model.potential[0];
  KernelSpec phi1 = model.potential[1];
  phi0.amplitude *= eps;
  phi1.amplitude *= eps;
  return make_model(model.dimension, model.jump[0], model.jump[1], phi0, phi1);
}

void validate(const MesoConfig& cfg) {
  if (cfg.epsilons.empty()) throw std::invalid_argument("meso: epsilon ladder is empty");
  for (std::size_t k = 0; k < cfg.epsilons.size(); ++k) {
    const double e = cfg.epsilons[k];
    if (!(e > 0.0 && e <= 1.0)) throw std::invalid_argument("meso: epsilons must lie in (0, 1]");
    if (k > 0 && !(e < cfg.epsilons[k - 1])) throw std::invalid_argument("meso: epsilons must be strictly descending");
  }
  if (cfg.replicas < 2) throw std::invalid_argument("meso: at least 2 replicas are needed");
  if (!(cfg.t_end >= 0.0)) throw std::invalid_argument("meso: t_end must be >= 0");
  if (!(cfg.snapshot_every > 0.0)) throw std::invalid_argument("meso: snapshot_every must be positive");
  if (!(cfg.dt > 0.0)) throw std::invalid_argument("meso: dt must be positive");
  if (!(cfg.particle_budget > 0.0)) throw std::invalid_argument("meso: particle_budget must be positive");
  if (cfg.histogram_points < 0) throw std::invalid_argument("meso: histogram_points must be >= 0");
  if (cfg.bootstrap_samples < 2) throw std::invalid_argument("meso: bootstrap_samples must be >= 2");
}

namespace {

GridSpec histogram_grid(const GridSpec& fine, int points) {
  if (points == 0) return fine;
  std::array<int, 2> n{points, fine.dimension == 2 ? points : 1};
  for (int a = 0; a < fine.dimension; ++a)
    if (fine.points[static_cast<std::size_t>(a)] % points != 0)
      throw std::invalid_argument("meso: histogram_points must divide the kinetic grid");
  return make_grid(fine.dimension, fine.box_length, n);
}

// Block average of a fine field onto a coarser grid that divides it.
Field block_average(const Field& f, const GridSpec& coarse) {
  const GridSpec& g = f.grid();
  if (g == coarse) return f;
  Field out(coarse, 0.0);
  const int r0 = g.points[0] / coarse.points[0];
  const int r1 = g.points[1] / coarse.points[1];
  for (std::size_t j = 0; j < g.cells(); ++j) {
    const auto [i0, i1] = g.unflatten(j);
    out[coarse.flatten(i0 / r0, i1 / r1)] += f[j];
  }
  out *= 1.0 / (r0 * r1);
  return out;
}

// Per-replica cell counts: counts[snapshot][type][cell].
using Counts = std::vector<std::array<std::vector<double>, 2>>;

Counts replica_counts(const SimulationResult& run, const GridSpec& grid) {
  Counts out;
  out.reserve(run.snapshots.size());
  for (const auto& snap : run.snapshots) {
    const DensityPair d = empirical_density(std::span<const ParticleConfig>(&snap, 1), grid);
    std::array<std::vector<double>, 2> c;
    for (int t = 0; t < 2; ++t) c[static_cast<std::size_t>(t)].assign(d[t].values().begin(), d[t].values().end());
    out.push_back(std::move(c));
  }
  return out;
}

// Sup error of eps * (mean over the chosen replicas) against the reference.
double sup_error(const std::vector<Counts>& counts, const std::vector<std::size_t>& pick, double eps,
                 const std::vector<std::array<Field, 2>>& reference) {
  double worst = 0.0;
  const double w = eps / static_cast<double>(pick.size());
  for (std::size_t s = 0; s < reference.size(); ++s) {
    for (int t = 0; t < 2; ++t) {
      const Field& ref = reference[s][static_cast<std::size_t>(t)];
      for (std::size_t j = 0; j < ref.size(); ++j) {
        double sum = 0.0;
        for (std::size_t r : pick) sum += counts[r][s][static_cast<std::size_t>(t)][j];
        worst = std::max(worst, std::abs(w * sum - ref[j]));
      }
    }
  }
  return worst;
}

}  // namespace

ScalingReport meso_experiment(const ModelParams& model, const DensityPair& rho0, const MesoConfig& cfg) {
  validate(cfg);
  const GridSpec& fine = rho0.grid();
  if (fine.dimension != model.dimension) throw std::invalid_argument("meso: grid and model dimensions differ");
  if (fine.dimension == 2 && fine.box_length[0] != fine.box_length[1])
    throw std::invalid_argument("meso: particle boxes are square");
  const GridSpec coarse = histogram_grid(fine, cfg.histogram_points);

  const auto masses = mass_totals(rho0);
  const double expected = (masses[0] + masses[1]) / cfg.epsilons.back();
  if (expected > cfg.particle_budget)
    throw std::invalid_argument("meso: expected particle count " + std::to_string(expected) +
                                " exceeds the budget " + std::to_string(cfg.particle_budget));

  // Kinetic reference at the particle snapshot times.
  const std::vector<double> times = snapshot_times(cfg.t_end, cfg.snapshot_every);
  KineticRunConfig kcfg;
  kcfg.t_end = cfg.t_end;
  kcfg.dt = cfg.dt;
  kcfg.snapshot_every = cfg.snapshot_every;
  kcfg.method = KineticMethod::rk4;
  const KineticOperator op(model, fine);
  const KineticResult kin = integrate_rk4(rho0, op, kcfg);
  std::vector<std::array<Field, 2>> reference;
  for (double t : times) {
    const auto it = std::find_if(kin.trajectory.begin(), kin.trajectory.end(),
                                 [&](const TimedDensity& s) { return std::abs(s.t - t) <= 1e-9 * std::max(1.0, t); });
    if (it == kin.trajectory.end())
      throw std::invalid_argument("meso: kinetic snapshots do not cover particle snapshot time " + std::to_string(t));
    reference.push_back({block_average(it->rho[0], coarse), block_average(it->rho[1], coarse)});
  }

  ScalingReport report;
  report.snapshot_times = times;
  RandomStream boot(cfg.seed, ~std::uint64_t{0});
  for (std::size_t k = 0; k < cfg.epsilons.size(); ++k) {
    const double eps = cfg.epsilons[k];
    const ModelParams scaled = scale_model(model, eps);
    const ConfigFactory init = [&rho0, eps](RandomStream& rng) { return init_poisson_field(rho0, 1.0 / eps, rng); };
    const auto runs = simulate_ensemble(init, scaled, cfg.t_end, cfg.snapshot_every, cfg.seed, cfg.replicas,
                                        (static_cast<std::uint64_t>(k) + 1) << 32);

    std::vector<Counts> counts;
    counts.reserve(runs.size());
    double particles = 0.0;
    for (const auto& run : runs) {
      counts.push_back(replica_counts(run, coarse));
      particles += static_cast<double>(run.snapshots.front().total());
    }

    std::vector<std::size_t> all(cfg.replicas);
    for (std::size_t r = 0; r < all.size(); ++r) all[r] = r;
    const double err = sup_error(counts, all, eps, reference);

    double mean = 0.0;
    double m2 = 0.0;
    std::vector<std::size_t> pick(cfg.replicas);
    for (std::size_t b = 0; b < cfg.bootstrap_samples; ++b) {
      for (auto& r : pick) r = boot.index(cfg.replicas);
      const double e = sup_error(counts, pick, eps, reference);
      const double d = e - mean;
      mean += d / static_cast<double>(b + 1);
      m2 += d * (e - mean);
    }

    report.epsilons.push_back(eps);
    report.errors.push_back(err);
    report.standard_errors.push_back(std::sqrt(m2 / static_cast<double>(cfg.bootstrap_samples - 1)));
    report.replicas.push_back(cfg.replicas);
    report.mean_particles.push_back(particles / static_cast<double>(cfg.replicas));
  }
  return report;
}

}  // namespace wrdyn
