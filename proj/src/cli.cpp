// Copyright 2026 The wrdyn Authors
// SPDX-License-Identifier: Apache-2.0

#include "wrdyn/cli.hpp"

#include <omp.h>

#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <algorithm>
#include <iomanip>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "wrdyn/config.hpp"
#include "wrdyn/guarantees.hpp"
#include "wrdyn/io.hpp"
#include "wrdyn/log.hpp"
#include "wrdyn/mesoscale.hpp"
#include "wrdyn/particles.hpp"
#include "wrdyn/stationary.hpp"

namespace wrdyn::cli {

namespace {

using nlohmann::json;

// File name -> payload, written only after the whole pipeline succeeded.
using Outputs = std::map<std::string, std::string>;

std::string dump(const json& j) { return j.dump(2) + "\n"; }

std::string classification_name(Stability s) { return std::string(to_string(s)); }

json envelope_json(const EnvelopeReport& e) {
  json slack = json::array();
  for (const auto& s : e.relative_slack) slack.push_back({s[0], s[1]});
  return {{"passed", e.passed},
          {"min_value", e.min_value},
          {"worst_margin", e.worst_margin},
          {"worst_snapshot", e.worst_snapshot},
          {"worst_type", e.worst_type},
          {"worst_cell", e.worst_cell},
          {"violations", e.violations},
          {"relative_slack", slack}};
}

json kinetic_cfg_json(const KineticRunConfig& c) {
  return {{"t_end", c.t_end},
          {"dt", c.dt},
          {"method", c.method == KineticMethod::rk4 ? "rk4" : "picard"},
          {"picard_tol", c.picard_tol},
          {"picard_max_iter", c.picard_max_iter},
          {"snapshot_every", c.snapshot_every}};
}

void run_kinetic(const RunConfig& cfg, Outputs& files) {
  const DensityPair rho0 = make_initial(*cfg.initial, *cfg.grid);
  const KineticOperator op(*cfg.model, *cfg.grid);
  const KineticResult res = solve_kinetic(rho0, op, *cfg.kinetic);
  const auto& diag = res.diagnostics;

  json snaps = json::array();
  for (std::size_t s = 0; s < res.trajectory.size(); ++s) {
    std::ostringstream csv;
    write_density_csv(csv, res.trajectory[s].rho);
    std::ostringstream name;
    name << "trajectory/rho_" << std::setw(4) << std::setfill('0') << s << ".csv";
    files[name.str()] = csv.str();
    snaps.push_back({{"index", s},
                     {"t", res.trajectory[s].t},
                     {"file", name.str()},
                     {"mass", diag.masses.at(s)},
                     {"min", diag.min_values.at(s)}});
  }
  json j = {{"method", cfg.kinetic->method == KineticMethod::rk4 ? "rk4" : "picard"},
            {"model", to_json(*cfg.model)},
            {"grid", to_json(*cfg.grid)},
            {"cfg", kinetic_cfg_json(*cfg.kinetic)},
            {"snapshots", snaps},
            {"envelope", envelope_json(diag.envelope)},
            {"clamped", diag.clamped},
            {"negative_values", diag.negative_values}};
  if (cfg.kinetic->method == KineticMethod::picard)
    j["picard"] = {{"window_lengths", diag.window_lengths},
                   {"iterations", diag.iterations},
                   {"fixed_point_residual", diag.fixed_point_residual}};
  files["kinetic.json"] = dump(j);
}

void run_simulate(const RunConfig& cfg, std::uint64_t seed, Outputs& files) {
  const SimulateTask& task = *cfg.simulate;
  const ModelParams& model = *cfg.model;
  ConfigFactory init;
  if (task.intensity) {
    const double box = cfg.grid->box_length[0];
    const auto lambda = *task.intensity;
    const int d = model.dimension;
    init = [box, lambda, d](RandomStream& rng) { return init_poisson(box, d, lambda[0], lambda[1], rng); };
  } else {
    const DensityPair rho0 = make_initial(*cfg.initial, *cfg.grid);
    init = [rho0](RandomStream& rng) { return init_poisson_field(rho0, 1.0, rng); };
  }
  const auto runs = simulate_ensemble(init, model, task.t_end, task.snapshot_every, seed, task.replicas);
  const auto times = snapshot_times(task.t_end, task.snapshot_every);

  std::ostringstream csv;
  write_snapshot_csv(csv, runs, times);
  files["snapshots.csv"] = csv.str();

  json reps = json::array();
  std::uint64_t events = 0;
  std::array<std::uint64_t, 2> attempted{};
  std::array<std::uint64_t, 2> accepted{};
  for (const auto& r : runs) {
    events += r.stats.events();
    for (std::size_t t = 0; t < 2; ++t) {
      attempted[t] += r.stats.attempted[t];
      accepted[t] += r.stats.accepted[t];
    }
    reps.push_back({{"attempted", r.stats.attempted},
                    {"accepted", r.stats.accepted},
                    {"acceptance_ratio", {r.stats.acceptance_ratio(0), r.stats.acceptance_ratio(1)}},
                    {"clock_time", r.stats.clock_time},
                    {"counts", {r.snapshots.front().count(0), r.snapshots.front().count(1)}}});
  }
  auto ratio = [](std::uint64_t acc, std::uint64_t att) {
    return att == 0 ? 1.0 : static_cast<double>(acc) / static_cast<double>(att);
  };
  files["stats.json"] = dump({{"seed", seed},
                              {"replicas", task.replicas},
                              {"snapshot_times", times},
                              {"events", events},
                              {"attempted", attempted},
                              {"accepted", accepted},
                              {"acceptance_ratio", {ratio(accepted[0], attempted[0]), ratio(accepted[1], attempted[1])}},
                              {"per_replica", reps}});
}

void run_stationary(const RunConfig& cfg, Outputs& files) {
  const StationaryTask& task = *cfg.stationary;
  const auto points = constant_solutions(task.ctilde[0], task.ctilde[1], *cfg.model, task.scan);
  json list = json::array();
  for (const auto& p : points)
    list.push_back({{"C0", p.c0},
                    {"C1", p.c1},
                    {"Ctilde0", p.ctilde0},
                    {"Ctilde1", p.ctilde1},
                    {"product", p.product},
                    {"classification", classification_name(p.classification)}});
  files["stationary.json"] = dump({{"ctilde", task.ctilde}, {"points", list}});
}

double default_p_max(const ModelParams& model, const std::optional<double>& p_star) {
  if (p_star) return 3.0 * *p_star;
  double r = model.potential[0].range;
  for (const auto* k : {&model.potential[1], &model.jump[0], &model.jump[1]}) r = std::min(r, k->range);
  return 10.0 / r;
}

void run_stability(const RunConfig& cfg, Outputs& files) {
  const StabilityTask& task = *cfg.stability;
  const ModelParams& model = *cfg.model;
  const double c0 = task.state[0];
  const double c1 = task.state[1];
  const auto verdict = classify_stability(c0, c1, model);
  const auto p_star = critical_wavenumber(c0, c1, model);
  const double p_max = task.p_max > 0.0 ? task.p_max : default_p_max(model, p_star);

  std::ostringstream csv;
  csv << "p,product_hat,lambda_max,lambda_min\n";
  double best = -std::numeric_limits<double>::infinity();
  double best_p = 0.0;
  for (int k = 0; k < task.points; ++k) {
    const double p = p_max * k / (task.points - 1);
    const auto d = dispersion_growth(p, c0, c1, model);
    csv << format_double(p) << ',' << format_double(d.product_hat) << ',' << format_double(d.growth_rates[0]) << ','
        << format_double(d.growth_rates[1]) << '\n';
    if (k > 0 && d.growth_rates[0] > best) {
      best = d.growth_rates[0];
      best_p = p;
    }
  }
  files["dispersion.csv"] = csv.str();
  json j = {{"state", task.state},
            {"product", verdict.product},
            {"classification", classification_name(verdict.classification)},
            {"p_star", p_star ? json(*p_star) : json(nullptr)},
            {"p_max", p_max},
            {"max_growth_rate", best},
            {"argmax_p", best_p}};
  files["stability.json"] = dump(j);
}

void run_meso(const RunConfig& cfg, std::uint64_t seed, Outputs& files) {
  MesoConfig m = *cfg.meso;
  m.seed = seed;
  const DensityPair rho0 = make_initial(*cfg.initial, *cfg.grid);
  const ScalingReport r = meso_experiment(*cfg.model, rho0, m);
  files["scaling.json"] = dump({{"epsilons", r.epsilons},
                                {"errors", r.errors},
                                {"standard_errors", r.standard_errors},
                                {"replicas", r.replicas},
                                {"snapshot_times", r.snapshot_times},
                                {"mean_particles", r.mean_particles}});
  std::ostringstream csv;
  csv << "epsilon,error,se,replicas\n";
  for (std::size_t k = 0; k < r.epsilons.size(); ++k)
    csv << format_double(r.epsilons[k]) << ',' << format_double(r.errors[k]) << ','
        << format_double(r.standard_errors[k]) << ',' << r.replicas[k] << '\n';
  files["scaling.csv"] = csv.str();
}

json run_bounds(const RunConfig& cfg, Outputs& files) {
  const BoundsTask& task = *cfg.bounds;
  ModelParams constants;
  if (cfg.model) {
    constants = *cfg.model;
  } else {
    constants.alpha = {*task.alpha, *task.alpha};
    constants.phi_mass = {*task.c, *task.c};
    constants.alpha_max = *task.alpha;
    constants.c = *task.c;
  }
  BanachScaleParams params = scale_params(constants);
  if (task.alpha) params.alpha = *task.alpha;
  if (task.c) params.c = *task.c;
  validate(params);

  const auto delta = delta_theta(task.theta, params);
  const auto tau = tau_theta(task.theta, params);
  const double theta_prime = task.theta_prime ? *task.theta_prime : task.theta + (delta ? *delta : 1.0);
  const double theta_dd = task.theta_dd ? *task.theta_dd : task.theta - 1.0;
  json j = {{"theta", task.theta},
            {"theta_prime", theta_prime},
            {"theta_dd", theta_dd},
            {"alpha", params.alpha},
            {"c", params.c},
            {"T", horizon_T(theta_prime, task.theta, params)},
            {"delta", delta ? json(*delta) : json(nullptr)},
            {"tau", tau ? json(*tau) : json(nullptr)},
            {"horizon", delta ? "bounded" : "unbounded"},
            {"norm_bound", operator_norm_bound(task.theta, theta_dd, constants)}};
  files["bounds.json"] = dump(j);
  return j;
}

std::string utc_now() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Two-type interacting jump process: particle simulator and kinetic solver"};
  app.set_version_flag("--version", std::string(WRDYN_VERSION));
  app.require_subcommand(1, 1);
  app.fallthrough();

  std::string config_path;
  std::string out_dir;
  std::optional<std::uint64_t> seed_flag;
  int workers = 0;
  bool quiet = false;
  app.add_option("--config", config_path, "JSON configuration file")->required()->check(CLI::ExistingFile);
  app.add_option("--out", out_dir, "Output directory (overrides out_dir)");
  app.add_option("--seed", seed_flag, "64-bit seed (overrides seed)");
  app.add_option("--workers", workers, "Worker threads (default: all)")->check(CLI::PositiveNumber);
  app.add_flag("--quiet", quiet, "Suppress progress and warnings");
  const char* names[] = {"kinetic", "simulate", "stationary", "stability", "meso", "bounds"};
  const char* help[] = {"Integrate the kinetic equations",
                        "Simulate the particle system",
                        "Constant stationary solutions",
                        "Dispersion table and critical wavenumber",
                        "Epsilon-scaling experiment",
                        "Horizon and norm constants"};
  for (int k = 0; k < 6; ++k) app.add_subcommand(names[k], help[k]);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitValidation;
  }
  const std::string subcommand = app.get_subcommands().front()->get_name();
  set_warnings_enabled(!quiet);

  RunConfig cfg;
  try {
    std::ifstream f(config_path);
    if (!f) throw ConfigError("$", "cannot read " + config_path);
    json j;
    try {
      j = json::parse(f);
    } catch (const json::parse_error& e) {
      throw ConfigError("$", std::string("malformed JSON: ") + e.what());
    }
    cfg = parse_config(j);
    require_task(cfg, subcommand);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  }
  const std::uint64_t seed = seed_flag ? *seed_flag : cfg.seed;
  const std::filesystem::path dir = out_dir.empty() ? std::filesystem::path(cfg.out_dir) : std::filesystem::path(out_dir);
  if (workers > 0) omp_set_num_threads(workers);

  const std::string started = utc_now();
  const auto t0 = std::chrono::steady_clock::now();
  Outputs files;
  json stdout_payload;
  try {
    if (subcommand == "kinetic") {
      run_kinetic(cfg, files);
    } else if (subcommand == "simulate") {
      run_simulate(cfg, seed, files);
    } else if (subcommand == "stationary") {
      run_stationary(cfg, files);
    } else if (subcommand == "stability") {
      run_stability(cfg, files);
    } else if (subcommand == "meso") {
      run_meso(cfg, seed, files);
    } else {
      stdout_payload = run_bounds(cfg, files);
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  json outputs = json::array();
  for (const auto& [name, payload] : files) outputs.push_back(name);
  const json manifest = {{"subcommand", subcommand},
                         {"version", WRDYN_VERSION},
                         {"seed", seed},
                         {"config", cfg.source},
                         {"outputs", outputs},
                         {"runtime",
                          {{"started_utc", started},
                           {"wall_time_seconds", wall},
                           {"workers", workers > 0 ? workers : omp_get_max_threads()},
                           {"compiler", __VERSION__}}}};
  try {
    std::filesystem::create_directories(dir);
    for (const auto& [name, payload] : files) {
      const auto path = dir / name;
      std::filesystem::create_directories(path.parent_path());
      write_text_file(path, payload);
    }
    write_text_file(dir / "manifest.json", dump(manifest));
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitRuntime;
  }

  if (!stdout_payload.is_null()) out << stdout_payload.dump(2) << '\n';
  if (!quiet) err << subcommand << ": wrote " << files.size() + 1 << " files to " << dir.string() << '\n';
  return kExitOk;
}

}  // namespace wrdyn::cli
