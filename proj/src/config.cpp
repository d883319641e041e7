// Copyright 2026 The wrdyn Authors
// SPDX-License-Identifier: Apache-2.0

#include "wrdyn/config.hpp"

#include <cmath>
#include <initializer_list>
#include <limits>
#include <numbers>
#include <set>
#include <string_view>

namespace wrdyn {

namespace {

using nlohmann::json;

std::string child(const std::string& path, std::string_view key) { return path + "." + std::string(key); }
std::string child(const std::string& path, std::size_t index) { return path + "[" + std::to_string(index) + "]"; }

void require_object(const json& j, const std::string& path, std::initializer_list<std::string_view> allowed) {
  if (!j.is_object()) throw ConfigError(path, "expected an object");
  const std::set<std::string_view> keys(allowed);
  for (const auto& [key, value] : j.items())
    if (!keys.contains(key)) throw ConfigError(child(path, key), "unknown key");
}

const json& required(const json& j, const std::string& path, std::string_view key) {
  if (!j.contains(key)) throw ConfigError(child(path, key), "missing required key");
  return j.at(std::string(key));
}

double number(const json& j, const std::string& path) {
  if (!j.is_number()) throw ConfigError(path, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw ConfigError(path, "expected a finite number");
  return v;
}

double positive(const json& j, const std::string& path) {
  const double v = number(j, path);
  if (!(v > 0.0)) throw ConfigError(path, "must be positive");
  return v;
}

double nonnegative(const json& j, const std::string& path) {
  const double v = number(j, path);
  if (!(v >= 0.0)) throw ConfigError(path, "must be nonnegative");
  return v;
}

std::int64_t integer(const json& j, const std::string& path) {
  if (!j.is_number_integer()) throw ConfigError(path, "expected an integer");
  if (j.is_number_unsigned() && j.get<std::uint64_t>() > static_cast<std::uint64_t>(std::numeric_limits<std::int64_t>::max()))
    throw ConfigError(path, "integer out of range");
  return j.get<std::int64_t>();
}

std::int64_t positive_int(const json& j, const std::string& path) {
  const auto v = integer(j, path);
  if (v <= 0) throw ConfigError(path, "must be a positive integer");
  return v;
}

std::array<double, 2> pair_of(const json& j, const std::string& path, double (*each)(const json&, const std::string&)) {
  if (!j.is_array() || j.size() != 2) throw ConfigError(path, "expected an array of two numbers");
  return {each(j[0], child(path, 0)), each(j[1], child(path, 1))};
}

template <class T, class F>
std::optional<T> optional_key(const json& j, const std::string& path, std::string_view key, F read) {
  if (!j.contains(key)) return std::nullopt;
  return read(j.at(std::string(key)), child(path, key));
}

KernelSpec parse_kernel(const json& j, const std::string& path) {
  require_object(j, path, {"family", "amplitude", "range"});
  const json& fam = required(j, path, "family");
  if (!fam.is_string()) throw ConfigError(child(path, "family"), "expected a string");
  KernelFamily family{};
  try {
    family = parse_kernel_family(fam.get<std::string>());
  } catch (const std::invalid_argument& e) {
    throw ConfigError(child(path, "family"), e.what());
  }
  const double amplitude = nonnegative(required(j, path, "amplitude"), child(path, "amplitude"));
  const double range = positive(required(j, path, "range"), child(path, "range"));
  return make_kernel(family, amplitude, range);
}

ModelParams parse_model(const json& j, const std::string& path) {
  require_object(j, path, {"dimension", "jump", "potential"});
  const auto d = integer(required(j, path, "dimension"), child(path, "dimension"));
  if (d != 1 && d != 2) throw ConfigError(child(path, "dimension"), "must be 1 or 2");
  std::array<std::array<KernelSpec, 2>, 2> k{};
  int slot = 0;
  for (const char* name : {"jump", "potential"}) {
    const std::string p = child(path, name);
    const json& arr = required(j, path, name);
    if (!arr.is_array() || arr.size() != 2) throw ConfigError(p, "expected an array of two kernel specs");
    for (std::size_t i = 0; i < 2; ++i) k[static_cast<std::size_t>(slot)][i] = parse_kernel(arr[i], child(p, i));
    ++slot;
  }
  for (std::size_t i = 0; i < 2; ++i)
    if (!(kernel_mass(k[0][i], static_cast<int>(d)) > 0.0))
      throw ConfigError(child(child(path, "jump"), i), "jump kernel must have positive mass");
  return make_model(static_cast<int>(d), k[0][0], k[0][1], k[1][0], k[1][1]);
}

GridSpec parse_grid(const json& j, const std::string& path, int dimension) {
  require_object(j, path, {"box_length", "points"});
  std::array<double, 2> box{1.0, 1.0};
  std::array<int, 2> points{1, 1};
  const json& b = required(j, path, "box_length");
  const json& n = required(j, path, "points");
  const std::string bp = child(path, "box_length");
  const std::string np = child(path, "points");
  auto read_points = [](const json& v, const std::string& p) {
    const auto x = positive_int(v, p);
    if (x > (1 << 20)) throw ConfigError(p, "too many grid points");
    return static_cast<int>(x);
  };
  if (b.is_array()) {
    if (b.size() != static_cast<std::size_t>(dimension)) throw ConfigError(bp, "one entry per axis expected");
    for (std::size_t a = 0; a < b.size(); ++a) box[a] = positive(b[a], child(bp, a));
  } else {
    box[0] = positive(b, bp);
    box[1] = box[0];
  }
  if (n.is_array()) {
    if (n.size() != static_cast<std::size_t>(dimension)) throw ConfigError(np, "one entry per axis expected");
    for (std::size_t a = 0; a < n.size(); ++a) points[a] = read_points(n[a], child(np, a));
  } else {
    points[0] = read_points(n, np);
    points[1] = points[0];
  }
  return make_grid(dimension, box, points);
}

InitialProfile parse_initial(const json& j, const std::string& path) {
  require_object(j, path, {"base", "amplitude", "mode"});
  InitialProfile p;
  p.base = pair_of(required(j, path, "base"), child(path, "base"), nonnegative);
  if (j.contains("amplitude")) p.amplitude = pair_of(j["amplitude"], child(path, "amplitude"), number);
  for (std::size_t i = 0; i < 2; ++i)
    if (std::abs(p.amplitude[i]) > p.base[i])
      throw ConfigError(child(child(path, "amplitude"), i), "amplitude must not exceed base (densities are nonnegative)");
  if (j.contains("mode")) {
    const json& m = j["mode"];
    const std::string mp = child(path, "mode");
    if (!m.is_array() || m.size() != 2) throw ConfigError(mp, "expected an array of two integers");
    for (std::size_t a = 0; a < 2; ++a) {
      const auto k = integer(m[a], child(mp, a));
      if (std::abs(k) > 1 << 20) throw ConfigError(child(mp, a), "mode out of range");
      p.mode[a] = static_cast<int>(k);
    }
  }
  return p;
}

KineticRunConfig parse_kinetic(const json& j, const std::string& path) {
  require_object(j, path, {"t_end", "dt", "method", "picard_tol", "picard_max_iter", "snapshot_every"});
  KineticRunConfig c;
  if (j.contains("t_end")) c.t_end = nonnegative(j["t_end"], child(path, "t_end"));
  if (j.contains("dt")) c.dt = positive(j["dt"], child(path, "dt"));
  if (j.contains("method")) {
    const json& m = j["method"];
    if (m == "rk4")
      c.method = KineticMethod::rk4;
    else if (m == "picard")
      c.method = KineticMethod::picard;
    else
      throw ConfigError(child(path, "method"), "expected \"rk4\" or \"picard\"");
  }
  if (j.contains("picard_tol")) c.picard_tol = positive(j["picard_tol"], child(path, "picard_tol"));
  if (j.contains("picard_max_iter")) {
    const auto v = positive_int(j["picard_max_iter"], child(path, "picard_max_iter"));
    if (v > 1000000) throw ConfigError(child(path, "picard_max_iter"), "too large");
    c.picard_max_iter = static_cast<int>(v);
  }
  if (j.contains("snapshot_every")) c.snapshot_every = positive(j["snapshot_every"], child(path, "snapshot_every"));
  try {
    validate(c);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(path, e.what());
  }
  return c;
}

SimulateTask parse_simulate(const json& j, const std::string& path) {
  require_object(j, path, {"t_end", "snapshot_every", "replicas", "intensity"});
  SimulateTask s;
  if (j.contains("t_end")) s.t_end = nonnegative(j["t_end"], child(path, "t_end"));
  if (j.contains("snapshot_every")) s.snapshot_every = positive(j["snapshot_every"], child(path, "snapshot_every"));
  if (j.contains("replicas")) s.replicas = static_cast<std::size_t>(positive_int(j["replicas"], child(path, "replicas")));
  if (j.contains("intensity")) s.intensity = pair_of(j["intensity"], child(path, "intensity"), nonnegative);
  return s;
}

RootScanOptions parse_scan(const json& j, const std::string& path, RootScanOptions o) {
  if (j.contains("scan_points")) {
    const auto v = positive_int(j["scan_points"], child(path, "scan_points"));
    if (v > 100000000) throw ConfigError(child(path, "scan_points"), "too large");
    o.scan_points = static_cast<int>(v);
  }
  if (j.contains("tolerance")) o.tolerance = positive(j["tolerance"], child(path, "tolerance"));
  return o;
}

StationaryTask parse_stationary(const json& j, const std::string& path) {
  require_object(j, path, {"ctilde", "scan_points", "tolerance"});
  StationaryTask s;
  s.ctilde = pair_of(required(j, path, "ctilde"), child(path, "ctilde"), positive);
  s.scan = parse_scan(j, path, s.scan);
  return s;
}

StabilityTask parse_stability(const json& j, const std::string& path) {
  require_object(j, path, {"state", "p_max", "points"});
  StabilityTask s;
  s.state = pair_of(required(j, path, "state"), child(path, "state"), nonnegative);
  if (j.contains("p_max")) s.p_max = positive(j["p_max"], child(path, "p_max"));
  if (j.contains("points")) {
    const auto v = positive_int(j["points"], child(path, "points"));
    if (v < 2 || v > 10000000) throw ConfigError(child(path, "points"), "must lie in [2, 1e7]");
    s.points = static_cast<int>(v);
  }
  return s;
}

MesoConfig parse_meso(const json& j, const std::string& path) {
  require_object(j, path, {"epsilons", "replicas", "t_end", "snapshot_every", "dt", "particle_budget",
                           "histogram_points", "bootstrap_samples"});
  MesoConfig m;
  if (j.contains("epsilons")) {
    const json& e = j["epsilons"];
    const std::string ep = child(path, "epsilons");
    if (!e.is_array() || e.empty()) throw ConfigError(ep, "expected a nonempty array");
    m.epsilons.clear();
    for (std::size_t k = 0; k < e.size(); ++k) {
      const double v = positive(e[k], child(ep, k));
      if (v > 1.0) throw ConfigError(child(ep, k), "must lie in (0, 1]");
      m.epsilons.push_back(v);
    }
  }
  if (j.contains("replicas")) m.replicas = static_cast<std::size_t>(positive_int(j["replicas"], child(path, "replicas")));
  if (j.contains("t_end")) m.t_end = nonnegative(j["t_end"], child(path, "t_end"));
  if (j.contains("snapshot_every")) m.snapshot_every = positive(j["snapshot_every"], child(path, "snapshot_every"));
  if (j.contains("dt")) m.dt = positive(j["dt"], child(path, "dt"));
  if (j.contains("particle_budget")) m.particle_budget = positive(j["particle_budget"], child(path, "particle_budget"));
  if (j.contains("histogram_points")) {
    const auto v = positive_int(j["histogram_points"], child(path, "histogram_points"));
    if (v > (1 << 20)) throw ConfigError(child(path, "histogram_points"), "too large");
    m.histogram_points = static_cast<int>(v);
  }
  if (j.contains("bootstrap_samples"))
    m.bootstrap_samples = static_cast<std::size_t>(positive_int(j["bootstrap_samples"], child(path, "bootstrap_samples")));
  try {
    validate(m);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(path, e.what());
  }
  return m;
}

BoundsTask parse_bounds(const json& j, const std::string& path) {
  require_object(j, path, {"theta", "theta_prime", "theta_dd", "alpha", "c"});
  BoundsTask b;
  b.theta = number(required(j, path, "theta"), child(path, "theta"));
  b.theta_prime = optional_key<double>(j, path, "theta_prime", number);
  b.theta_dd = optional_key<double>(j, path, "theta_dd", number);
  b.alpha = optional_key<double>(j, path, "alpha", positive);
  b.c = optional_key<double>(j, path, "c", nonnegative);
  if (b.theta_prime && !(*b.theta_prime > b.theta)) throw ConfigError(child(path, "theta_prime"), "must exceed theta");
  if (b.theta_dd && !(*b.theta_dd < b.theta)) throw ConfigError(child(path, "theta_dd"), "must be below theta");
  return b;
}

}  // namespace

DensityPair make_initial(const InitialProfile& profile, const GridSpec& grid) {
  DensityPair rho = DensityPair::constant(grid, profile.base[0], profile.base[1]);
  for (std::size_t j = 0; j < grid.cells(); ++j) {
    const auto [i0, i1] = grid.unflatten(j);
    double phase = 2.0 * std::numbers::pi * profile.mode[0] * grid.coordinate(0, i0) / grid.box_length[0];
    if (grid.dimension == 2) phase += 2.0 * std::numbers::pi * profile.mode[1] * grid.coordinate(1, i1) / grid.box_length[1];
    const double c = std::cos(phase);
    for (int t = 0; t < 2; ++t) rho[t][j] += profile.amplitude[static_cast<std::size_t>(t)] * c;
  }
  return rho;
}

RunConfig parse_config(const json& j) {
  const std::string root = "$";
  require_object(j, root,
                 {"model", "grid", "initial", "seed", "out_dir", "kinetic", "simulate", "stationary", "stability", "meso",
                  "bounds"});
  RunConfig c;
  c.source = j;
  if (j.contains("model")) c.model = parse_model(j["model"], "$.model");
  if (j.contains("grid")) {
    if (!c.model) throw ConfigError("$.grid", "a grid requires $.model (for the dimension)");
    c.grid = parse_grid(j["grid"], "$.grid", c.model->dimension);
  }
  if (j.contains("initial")) c.initial = parse_initial(j["initial"], "$.initial");
  if (j.contains("seed")) {
    const json& s = j["seed"];
    if (!s.is_number_integer() || (s.is_number_integer() && !s.is_number_unsigned() && s.get<std::int64_t>() < 0))
      throw ConfigError("$.seed", "expected a nonnegative 64-bit integer");
    c.seed = s.get<std::uint64_t>();
  }
  if (j.contains("out_dir")) {
    if (!j["out_dir"].is_string() || j["out_dir"].get<std::string>().empty())
      throw ConfigError("$.out_dir", "expected a nonempty string");
    c.out_dir = j["out_dir"].get<std::string>();
  }
  if (j.contains("kinetic")) c.kinetic = parse_kinetic(j["kinetic"], "$.kinetic");
  if (j.contains("simulate")) c.simulate = parse_simulate(j["simulate"], "$.simulate");
  if (j.contains("stationary")) c.stationary = parse_stationary(j["stationary"], "$.stationary");
  if (j.contains("stability")) c.stability = parse_stability(j["stability"], "$.stability");
  if (j.contains("meso")) c.meso = parse_meso(j["meso"], "$.meso");
  if (j.contains("bounds")) c.bounds = parse_bounds(j["bounds"], "$.bounds");
  return c;
}

void require_task(const RunConfig& cfg, const std::string& subcommand) {
  auto need = [](bool ok, const std::string& path, const std::string& why) {
    if (!ok) throw ConfigError(path, why);
  };
  if (subcommand == "kinetic") {
    need(cfg.model.has_value(), "$.model", "required by kinetic");
    need(cfg.grid.has_value(), "$.grid", "required by kinetic");
    need(cfg.initial.has_value(), "$.initial", "required by kinetic");
    need(cfg.kinetic.has_value(), "$.kinetic", "required by kinetic");
    if (cfg.kinetic->dt > 0.1 / cfg.model->alpha_max)
      throw ConfigError("$.kinetic.dt", "must not exceed 0.1 / max alpha_i");
  } else if (subcommand == "simulate") {
    need(cfg.model.has_value(), "$.model", "required by simulate");
    need(cfg.simulate.has_value(), "$.simulate", "required by simulate");
    if (!cfg.simulate->intensity) {
      need(cfg.grid.has_value(), "$.grid", "required by simulate without an intensity");
      need(cfg.initial.has_value(), "$.initial", "required by simulate without an intensity");
      if (cfg.grid->dimension == 2 && cfg.grid->box_length[0] != cfg.grid->box_length[1])
        throw ConfigError("$.grid.box_length", "particle boxes are square");
    } else {
      need(cfg.grid.has_value(), "$.grid", "required by simulate (box length)");
      if (cfg.grid->dimension == 2 && cfg.grid->box_length[0] != cfg.grid->box_length[1])
        throw ConfigError("$.grid.box_length", "particle boxes are square");
    }
  } else if (subcommand == "stationary") {
    need(cfg.model.has_value(), "$.model", "required by stationary");
    need(cfg.stationary.has_value(), "$.stationary", "required by stationary");
  } else if (subcommand == "stability") {
    need(cfg.model.has_value(), "$.model", "required by stability");
    need(cfg.stability.has_value(), "$.stability", "required by stability");
  } else if (subcommand == "meso") {
    need(cfg.model.has_value(), "$.model", "required by meso");
    need(cfg.grid.has_value(), "$.grid", "required by meso");
    need(cfg.initial.has_value(), "$.initial", "required by meso");
    need(cfg.meso.has_value(), "$.meso", "required by meso");
    if (cfg.grid->dimension == 2 && cfg.grid->box_length[0] != cfg.grid->box_length[1])
      throw ConfigError("$.grid.box_length", "particle boxes are square");
    if (cfg.meso->dt > 0.1 / cfg.model->alpha_max) throw ConfigError("$.meso.dt", "must not exceed 0.1 / max alpha_i");
    const int hp = cfg.meso->histogram_points;
    for (int a = 0; a < cfg.grid->dimension && hp > 0; ++a)
      if (cfg.grid->points[static_cast<std::size_t>(a)] % hp != 0)
        throw ConfigError("$.meso.histogram_points", "must divide the grid points");
  } else if (subcommand == "bounds") {
    need(cfg.bounds.has_value(), "$.bounds", "required by bounds");
    need(cfg.model.has_value() || (cfg.bounds->alpha && cfg.bounds->c), "$.bounds",
         "needs $.model or both alpha and c");
  } else {
    throw ConfigError("$", "unknown subcommand " + subcommand);
  }
}

}  // namespace wrdyn
