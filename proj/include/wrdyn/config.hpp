// Copyright 2026 The wrdyn Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "wrdyn/guarantees.hpp"
#include "wrdyn/kinetic.hpp"
#include "wrdyn/mesoscale.hpp"
#include "wrdyn/stationary.hpp"

namespace wrdyn {

/// Schema violation; path() is a JSON path such as $.model.jump[0].amplitude.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string path, const std::string& message)
      : std::runtime_error(path + ": " + message), path_(std::move(path)) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

/// rho_i(x) = base_i + amplitude_i cos(2 pi (k_0 x_0 / L_0 + k_1 x_1 / L_1)).
struct InitialProfile {
  std::array<double, 2> base{};
  std::array<double, 2> amplitude{};
  std::array<int, 2> mode{};
};

DensityPair make_initial(const InitialProfile& profile, const GridSpec& grid);

struct SimulateTask {
  double t_end = 1.0;
  double snapshot_every = 0.1;
  std::size_t replicas = 1;
  /// Constant Poisson intensities; when absent the initial profile is used.
  std::optional<std::array<double, 2>> intensity;
};

struct StationaryTask {
  std::array<double, 2> ctilde{};
  RootScanOptions scan;
};

struct StabilityTask {
  std::array<double, 2> state{};
  double p_max = 0.0;  ///< 0 picks a range past the critical wavenumber
  int points = 200;
};

struct BoundsTask {
  double theta = 0.0;
  std::optional<double> theta_prime;  ///< defaults to theta + delta(theta)
  std::optional<double> theta_dd;     ///< defaults to theta - 1
  std::optional<double> alpha;        ///< overrides the model value
  std::optional<double> c;
};

struct RunConfig {
  std::optional<ModelParams> model;
  std::optional<GridSpec> grid;
  std::optional<InitialProfile> initial;
  std::uint64_t seed = 0;
  std::string out_dir = "out";

  std::optional<KineticRunConfig> kinetic;
  std::optional<SimulateTask> simulate;
  std::optional<StationaryTask> stationary;
  std::optional<StabilityTask> stability;
  std::optional<MesoConfig> meso;
  std::optional<BoundsTask> bounds;

  nlohmann::json source;
};

/// Parses and validates every present block. Unknown keys are errors.
RunConfig parse_config(const nlohmann::json& j);

/// Checks that the blocks needed by `subcommand` are present.
void require_task(const RunConfig& cfg, const std::string& subcommand);

}  // namespace wrdyn
