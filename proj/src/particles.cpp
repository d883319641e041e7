// Copyright 2026 The wrdyn Authors
// SPDX-License-Identifier: Apache-2.0

#include "wrdyn/particles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <exception>
#include <stdexcept>

namespace wrdyn {

namespace {

double wrap(double x, double box_length) {
  double w = std::fmod(x, box_length);
  if (w < 0.0) w += box_length;
  if (w >= box_length) w = 0.0;
  return w;
}

void check_config(const ParticleConfig& c) {
  check_dimension(c.dimension);
  if (!(c.box_length > 0.0)) throw std::invalid_argument("particle box length must be positive");
}

}  // namespace

ParticleConfig init_poisson(double box_length, int d, double intensity0, double intensity1, RandomStream& rng) {
  if (!(intensity0 >= 0.0) || !(intensity1 >= 0.0)) throw std::invalid_argument("init_poisson: intensities must be >= 0");
  ParticleConfig c;
  c.box_length = box_length;
  c.dimension = d;
  check_config(c);
  const double volume = d == 1 ? box_length : box_length * box_length;
  const std::array<double, 2> intensity{intensity0, intensity1};
  for (int t = 0; t < 2; ++t) {
    const auto n = rng.poisson(intensity[static_cast<std::size_t>(t)] * volume);
    auto& pts = c.points[static_cast<std::size_t>(t)];
    pts.reserve(n);
    for (std::uint64_t k = 0; k < n; ++k) {
      const double x = box_length * rng.uniform();
      const double y = d == 2 ? box_length * rng.uniform() : 0.0;
      pts.push_back({x, y});
    }
  }
  return c;
}

ParticleConfig init_poisson_field(const DensityPair& intensity, double scale, RandomStream& rng) {
  const GridSpec& g = intensity.grid();
  if (g.dimension == 2 && (g.box_length[0] != g.box_length[1]))
    throw std::invalid_argument("init_poisson_field: particle boxes are square");
  if (!(scale >= 0.0)) throw std::invalid_argument("init_poisson_field: scale must be >= 0");
  ParticleConfig c;
  c.box_length = g.box_length[0];
  c.dimension = g.dimension;
  const double h0 = g.spacing(0);
  const double h1 = g.spacing(1);
  for (int t = 0; t < 2; ++t) {
    auto& pts = c.points[static_cast<std::size_t>(t)];
    const Field& f = intensity[t];
    for (std::size_t cell = 0; cell < g.cells(); ++cell) {
      if (f[cell] < 0.0) throw std::invalid_argument("init_poisson_field: negative intensity");
      const auto n = rng.poisson(scale * f[cell] * g.cell_volume());
      const auto [i0, i1] = g.unflatten(cell);
      for (std::uint64_t k = 0; k < n; ++k) {
        const double x = wrap((i0 + rng.uniform()) * h0, c.box_length);
        const double y = g.dimension == 2 ? wrap((i1 + rng.uniform()) * h1, c.box_length) : 0.0;
        pts.push_back({x, y});
      }
    }
  }
  return c;
}

double SimStats::acceptance_ratio(int type) const {
  const auto a = attempted[static_cast<std::size_t>(type)];
  return a == 0 ? 1.0 : static_cast<double>(accepted[static_cast<std::size_t>(type)]) / static_cast<double>(a);
}

JumpProcess::JumpProcess(ParticleConfig config, const ModelParams& model, RandomStream rng)
    : config_(std::move(config)), model_(model), rng_(std::move(rng)) {
  check_config(config_);
  if (config_.dimension != model_.dimension) throw std::invalid_argument("JumpProcess: config and model dimensions differ");
  for (int t = 0; t < 2; ++t) {
    for (const Vec& p : config_.points[static_cast<std::size_t>(t)])
      for (int k = 0; k < config_.dimension; ++k)
        if (!(p[static_cast<std::size_t>(k)] >= 0.0 && p[static_cast<std::size_t>(k)] < config_.box_length))
          throw std::invalid_argument("JumpProcess: particle outside [0, L)");
  }
  for (int i = 0; i < 2; ++i)
    cutoff_[static_cast<std::size_t>(i)] =
        interaction_cutoff(model_.potential[static_cast<std::size_t>(i)], config_.box_length, config_.dimension);
  for (int t = 0; t < 2; ++t) {
    auto& idx = index_[static_cast<std::size_t>(t)];
    idx = CellIndex(config_.box_length, config_.dimension, cutoff_[static_cast<std::size_t>(1 - t)]);
    idx.build(config_.points[static_cast<std::size_t>(t)]);
  }
  stats_.rng_seed = rng_.seed();
  stats_.clock_time = config_.sim_time;
}

double JumpProcess::total_rate() const {
  return model_.alpha[0] * static_cast<double>(config_.count(0)) + model_.alpha[1] * static_cast<double>(config_.count(1));
}

double JumpProcess::acceptance_probability(int type, const Vec& y) const {
  const auto other = static_cast<std::size_t>(1 - type);
  const double energy =
      index_[other].interaction_sum(y, config_.points[other], model_.potential[static_cast<std::size_t>(type)]);
  return std::exp(-energy);
}

double JumpProcess::draw_waiting_time() {
  const double rate = total_rate();
  return rate > 0.0 ? rng_.exponential(rate) : std::numeric_limits<double>::infinity();
}

EventRecord JumpProcess::step() { return apply_event(draw_waiting_time()); }

EventRecord JumpProcess::apply_event(double waiting_time) {
  if (config_.total() == 0) throw std::invalid_argument("event_step: empty configuration");
  EventRecord ev;
  ev.waiting_time = waiting_time;
  config_.sim_time += waiting_time;
  stats_.clock_time = config_.sim_time;
  const double rate = total_rate();
  if (!(rate > 0.0) || !std::isfinite(waiting_time)) return ev;

  const double weight0 = model_.alpha[0] * static_cast<double>(config_.count(0));
  ev.type = rng_.uniform() * rate < weight0 ? 0 : 1;
  const auto t = static_cast<std::size_t>(ev.type);
  auto& pts = config_.points[t];
  ev.particle = static_cast<std::size_t>(rng_.index(pts.size()));

  const Vec xi = sample_displacement(model_.jump[t], config_.dimension, rng_);
  const Vec& x = pts[ev.particle];
  ev.proposal = {wrap(x[0] + xi[0], config_.box_length),
                 config_.dimension == 2 ? wrap(x[1] + xi[1], config_.box_length) : 0.0};
  ev.acceptance = acceptance_probability(ev.type, ev.proposal);
  ++stats_.attempted[t];
  // u < p with u uniform on [0, 1) accepts with probability exactly p.
  if (rng_.uniform() < ev.acceptance) {
    ev.accepted = true;
    ++stats_.accepted[t];
    pts[ev.particle] = ev.proposal;
    index_[t].move(static_cast<std::uint32_t>(ev.particle), ev.proposal);
  }
  return ev;
}

EventRecord event_step(ParticleConfig& config, const ModelParams& model, RandomStream& rng) {
  JumpProcess process(config, model, rng);
  EventRecord ev = process.step();
  config = process.config();
  rng = process.rng();
  return ev;
}

std::vector<double> snapshot_times(double t_end, double snapshot_every) {
  if (!(t_end >= 0.0)) throw std::invalid_argument("t_end must be nonnegative");
  if (!(snapshot_every > 0.0)) throw std::invalid_argument("snapshot_every must be positive");
  std::vector<double> times;
  const auto k_max = static_cast<long>(std::floor(t_end / snapshot_every + 1e-9));
  for (long k = 0; k <= k_max; ++k) times.push_back(std::min(t_end, static_cast<double>(k) * snapshot_every));
  if (t_end - times.back() > 1e-12 * std::max(1.0, t_end)) times.push_back(t_end);
  return times;
}

SimulationResult simulate(const ParticleConfig& config0, const ModelParams& model, double t_end, double snapshot_every,
                          RandomStream& rng) {
  const auto times = snapshot_times(t_end, snapshot_every);
  ParticleConfig start = config0;
  const double t0 = start.sim_time;
  JumpProcess process(std::move(start), model, rng);
  SimulationResult out;
  out.snapshots.reserve(times.size());

  std::size_t next = 0;
  auto take = [&](double t) {
    ParticleConfig snap = process.config();
    snap.sim_time = t;
    out.snapshots.push_back(std::move(snap));
  };
  if (process.config().total() > 0) {
    while (next < times.size()) {
      // The state is constant until the next event.
      const double waiting = process.draw_waiting_time();
      const double t_event = process.config().sim_time + waiting;
      while (next < times.size() && t0 + times[next] < t_event) take(times[next++]);
      if (next >= times.size()) break;
      process.apply_event(waiting);
    }
  }
  while (next < times.size()) take(times[next++]);
  out.stats = process.stats();
  out.stats.clock_time = t0 + t_end;
  rng = process.rng();
  return out;
}

SimulationResult simulate(const ParticleConfig& config0, const ModelParams& model, double t_end, double snapshot_every,
                          std::uint64_t rng_seed) {
  RandomStream rng(rng_seed);
  return simulate(config0, model, t_end, snapshot_every, rng);
}

namespace {

SimulationResult run_replica(const ConfigFactory& init, const ModelParams& model, double t_end, double snapshot_every,
                             std::uint64_t seed, std::uint64_t stream) {
  RandomStream rng(seed, stream);
  const ParticleConfig start = init(rng);
  return simulate(start, model, t_end, snapshot_every, rng);
}

}  // namespace

std::vector<SimulationResult> simulate_ensemble(const ConfigFactory& init, const ModelParams& model, double t_end,
                                                double snapshot_every, std::uint64_t seed, std::size_t replicas,
                                                std::uint64_t first_stream) {
  std::vector<SimulationResult> out(replicas);
  const auto n = static_cast<std::ptrdiff_t>(replicas);
  std::exception_ptr error;
#pragma omp parallel for schedule(dynamic, 1)
  for (std::ptrdiff_t r = 0; r < n; ++r) {
    try {
      out[static_cast<std::size_t>(r)] =
          run_replica(init, model, t_end, snapshot_every, seed, first_stream + static_cast<std::uint64_t>(r));
    } catch (...) {
#pragma omp critical(wrdyn_ensemble_error)
      if (!error) error = std::current_exception();
    }
  }
  if (error) std::rethrow_exception(error);
  return out;
}

namespace reference {

std::vector<SimulationResult> simulate_ensemble_serial(const ConfigFactory& init, const ModelParams& model,
                                                       double t_end, double snapshot_every, std::uint64_t seed,
                                                       std::size_t replicas, std::uint64_t first_stream) {
  std::vector<SimulationResult> out;
  out.reserve(replicas);
  for (std::size_t r = 0; r < replicas; ++r)
    out.push_back(run_replica(init, model, t_end, snapshot_every, seed, first_stream + r));
  return out;
}

}  // namespace reference

namespace {

void check_box(const ParticleConfig& c, const GridSpec& grid) {
  if (c.dimension != grid.dimension) throw std::invalid_argument("empirical_density: dimension mismatch");
  for (int a = 0; a < grid.dimension; ++a)
    if (std::abs(grid.box_length[static_cast<std::size_t>(a)] - c.box_length) > 1e-12 * c.box_length)
      throw std::invalid_argument("empirical_density: grid box does not match particle box");
}

// Per-type cell counts of one configuration.
std::array<std::vector<double>, 2> cell_counts(const ParticleConfig& c, const GridSpec& grid) {
  std::array<std::vector<double>, 2> counts{std::vector<double>(grid.cells(), 0.0), std::vector<double>(grid.cells(), 0.0)};
  const double h0 = grid.spacing(0);
  const double h1 = grid.spacing(1);
  for (int t = 0; t < 2; ++t) {
    for (const Vec& p : c.points[static_cast<std::size_t>(t)]) {
      const int i0 = std::clamp(static_cast<int>(std::floor(p[0] / h0)), 0, grid.points[0] - 1);
      const int i1 = grid.dimension == 2 ? std::clamp(static_cast<int>(std::floor(p[1] / h1)), 0, grid.points[1] - 1) : 0;
      counts[static_cast<std::size_t>(t)][grid.flatten(i0, i1)] += 1.0;
    }
  }
  return counts;
}

// Streaming mean / variance (Welford).
struct Moments {
  std::size_t n = 0;
  double mean = 0.0;
  double m2 = 0.0;
  void add(double x) {
    ++n;
    const double d = x - mean;
    mean += d / static_cast<double>(n);
    m2 += d * (x - mean);
  }
  double standard_error() const {
    return n > 1 ? std::sqrt(m2 / static_cast<double>(n - 1) / static_cast<double>(n)) : 0.0;
  }
};

}  // namespace

DensityPair empirical_density(std::span<const ParticleConfig> ensemble, const GridSpec& grid) {
  if (ensemble.empty()) throw std::invalid_argument("empirical_density: empty ensemble");
  DensityPair out = DensityPair::constant(grid, 0.0, 0.0);
  for (const auto& c : ensemble) {
    check_box(c, grid);
    const auto counts = cell_counts(c, grid);
    for (int t = 0; t < 2; ++t)
      for (std::size_t j = 0; j < grid.cells(); ++j) out[t][j] += counts[static_cast<std::size_t>(t)][j];
  }
  const double norm = 1.0 / (grid.cell_volume() * static_cast<double>(ensemble.size()));
  out[0] *= norm;
  out[1] *= norm;
  return out;
}

SubPoissonReport subpoisson_check(std::span<const ParticleConfig> ensemble, const ModelParams& model, double c_bound,
                                  double t, const GridSpec& grid) {
  if (ensemble.empty()) throw std::invalid_argument("subpoisson_check: empty ensemble");
  const std::size_t n = grid.cells();
  const double v = grid.cell_volume();

  std::array<std::vector<Moments>, 2> first{std::vector<Moments>(n), std::vector<Moments>(n)};
  // Order-2 estimators: same-type pairs (A <= B) per type, cross-type pairs (A, B).
  std::array<std::vector<Moments>, 2> same{std::vector<Moments>(n * n), std::vector<Moments>(n * n)};
  std::vector<Moments> cross(n * n);
  for (const auto& c : ensemble) {
    check_box(c, grid);
    const auto counts = cell_counts(c, grid);
    for (int ty = 0; ty < 2; ++ty) {
      const auto& nc = counts[static_cast<std::size_t>(ty)];
      for (std::size_t a = 0; a < n; ++a) {
        first[static_cast<std::size_t>(ty)][a].add(nc[a]);
        same[static_cast<std::size_t>(ty)][a * n + a].add(nc[a] * (nc[a] - 1.0));
        for (std::size_t b = a + 1; b < n; ++b) same[static_cast<std::size_t>(ty)][a * n + b].add(nc[a] * nc[b]);
      }
    }
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b) cross[a * n + b].add(counts[0][a] * counts[1][b]);
  }

  SubPoissonReport r;
  r.worst_margin_order1 = std::numeric_limits<double>::infinity();
  r.worst_margin_order2 = std::numeric_limits<double>::infinity();
  auto judge = [&](const Moments& m, double scale, double bound, bool order1) {
    const double est = m.mean / scale;
    const double se = m.standard_error() / scale;
    const double margin = (bound + 3.0 * se - est) / bound;
    ++r.checks;
    if (order1) {
      r.worst_margin_order1 = std::min(r.worst_margin_order1, margin);
      r.max_density_ratio = std::max(r.max_density_ratio, est / bound);
      if (margin < 0.0) ++r.failures_order1;
    } else {
      r.worst_margin_order2 = std::min(r.worst_margin_order2, margin);
      if (margin < 0.0) ++r.failures_order2;
    }
  };
  for (int ty = 0; ty < 2; ++ty) {
    const double a = model.alpha[static_cast<std::size_t>(ty)];
    const double bound1 = c_bound * std::exp(a * t);
    const double bound2 = c_bound * c_bound * std::exp(2.0 * a * t);
    for (std::size_t i = 0; i < n; ++i) {
      judge(first[static_cast<std::size_t>(ty)][i], v, bound1, true);
      for (std::size_t j = i; j < n; ++j) judge(same[static_cast<std::size_t>(ty)][i * n + j], v * v, bound2, false);
    }
  }
  const double bound_cross = c_bound * c_bound * std::exp((model.alpha[0] + model.alpha[1]) * t);
  for (const auto& m : cross) judge(m, v * v, bound_cross, false);
  r.passed = r.failures_order1 == 0 && r.failures_order2 == 0;
  return r;
}

}  // namespace wrdyn
