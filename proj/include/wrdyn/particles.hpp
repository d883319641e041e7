// Copyright 2026 The wrdyn Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "wrdyn/cell_index.hpp"
#include "wrdyn/kinetic.hpp"
#include "wrdyn/random.hpp"

namespace wrdyn {

/// Two finite point sets on the torus [0, L)^d.
struct ParticleConfig {
  double box_length = 1.0;
  int dimension = 1;
  std::array<std::vector<Vec>, 2> points;
  double sim_time = 0.0;

  std::size_t count(int type) const { return points[static_cast<std::size_t>(type)].size(); }
  std::size_t total() const { return points[0].size() + points[1].size(); }
};

/// Poisson configuration with constant intensities on [0, L)^d.
ParticleConfig init_poisson(double box_length, int d, double intensity0, double intensity1, RandomStream& rng);

/// Poisson configuration whose intensity is `scale` times the cell-wise
/// constant field `intensity` (both components). The grid must be square
/// with equal box lengths.
ParticleConfig init_poisson_field(const DensityPair& intensity, double scale, RandomStream& rng);

struct SimStats {
  std::array<std::uint64_t, 2> attempted{};
  std::array<std::uint64_t, 2> accepted{};
  double clock_time = 0.0;
  std::uint64_t rng_seed = 0;

  std::uint64_t events() const { return attempted[0] + attempted[1]; }
  double acceptance_ratio(int type) const;
};

struct EventRecord {
  int type = 0;
  std::size_t particle = 0;
  Vec proposal{};
  double acceptance = 1.0;
  bool accepted = false;
  double waiting_time = 0.0;
};

/// Continuous-time jump dynamics. Each type-i particle proposes jumps at
/// total rate alpha_i with displacement density a_i / alpha_i; a proposal to
/// y is accepted with probability exp(-sum_{z in other type} phi_i(y - z)).
/// Accepted moves therefore occur at exactly the rate c_i(x, y, gamma).
class JumpProcess {
 public:
  JumpProcess(ParticleConfig config, const ModelParams& model, RandomStream rng);

  /// One Gillespie event (attempted jump). Throws on an empty configuration.
  EventRecord step();

  /// Exponential waiting time at the total proposal rate (infinite if zero).
  double draw_waiting_time();
  /// Advances the clock by `waiting_time`, then proposes and thins one jump.
  EventRecord apply_event(double waiting_time);

  /// Total proposal rate alpha_0 N_0 + alpha_1 N_1.
  double total_rate() const;
  double acceptance_probability(int type, const Vec& y) const;

  const ParticleConfig& config() const { return config_; }
  const SimStats& stats() const { return stats_; }
  RandomStream& rng() { return rng_; }
  const CellIndex& index(int type) const { return index_[static_cast<std::size_t>(type)]; }
  double cutoff(int type) const { return cutoff_[static_cast<std::size_t>(type)]; }

 private:
  ParticleConfig config_;
  ModelParams model_;
  RandomStream rng_;
  std::array<double, 2> cutoff_{};   ///< range of phi_i
  std::array<CellIndex, 2> index_;   ///< index_[t] holds type t, queried with phi_{1-t}
  SimStats stats_;
};

/// Single event on a bare configuration (builds the index each call).
EventRecord event_step(ParticleConfig& config, const ModelParams& model, RandomStream& rng);

struct SimulationResult {
  std::vector<ParticleConfig> snapshots;
  SimStats stats;
};

/// Snapshot times k * snapshot_every <= t_end, plus t_end itself.
std::vector<double> snapshot_times(double t_end, double snapshot_every);

SimulationResult simulate(const ParticleConfig& config0, const ModelParams& model, double t_end, double snapshot_every,
                          RandomStream& rng);
SimulationResult simulate(const ParticleConfig& config0, const ModelParams& model, double t_end, double snapshot_every,
                          std::uint64_t rng_seed);

using ConfigFactory = std::function<ParticleConfig(RandomStream&)>;

/// Replica r draws its initial state and its dynamics from stream (seed, first_stream + r).
/// Replicas run in parallel (OpenMP); output order and content do not depend
/// on the thread count.
std::vector<SimulationResult> simulate_ensemble(const ConfigFactory& init, const ModelParams& model, double t_end,
                                                double snapshot_every, std::uint64_t seed, std::size_t replicas,
                                                std::uint64_t first_stream = 0);

namespace reference {
std::vector<SimulationResult> simulate_ensemble_serial(const ConfigFactory& init, const ModelParams& model,
                                                       double t_end, double snapshot_every, std::uint64_t seed,
                                                       std::size_t replicas, std::uint64_t first_stream = 0);
}

/// Per-type particle histograms divided by cell volume and ensemble size.
DensityPair empirical_density(std::span<const ParticleConfig> ensemble, const GridSpec& grid);

/// Checks the correlation-function envelope k_t(eta) <= C^{|eta|} exp(t sum alpha_i |eta_i|)
/// for |eta| = 1 and 2 on grid cells, with a 3 standard error allowance.
struct SubPoissonReport {
  bool passed = true;
  std::size_t checks = 0;
  std::size_t failures_order1 = 0;
  std::size_t failures_order2 = 0;
  /// min over checks of (bound + 3 SE - estimate) / bound
  double worst_margin_order1 = 0.0;
  double worst_margin_order2 = 0.0;
  double max_density_ratio = 0.0;  ///< max estimate / bound, order 1
};

SubPoissonReport subpoisson_check(std::span<const ParticleConfig> ensemble, const ModelParams& model, double c_bound,
                                  double t, const GridSpec& grid);

}  // namespace wrdyn
