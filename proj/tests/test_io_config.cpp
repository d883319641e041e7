// Copyright 2026 The wrdyn Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>
#include <sstream>
#include <string>

#include "wrdyn/config.hpp"
#include "wrdyn/io.hpp"

using namespace wrdyn;
using nlohmann::json;

namespace {

json base_config() {
  return json::parse(R"({
    "model": {
      "dimension": 1,
      "jump": [{"family": "gaussian", "amplitude": 0.4, "range": 1.0},
               {"family": "tophat", "amplitude": 0.5, "range": 1.0}],
      "potential": [{"family": "tophat", "amplitude": 1.0, "range": 0.5},
                    {"family": "exponential", "amplitude": 0.3, "range": 0.4}]
    },
    "grid": {"box_length": 10.0, "points": 64},
    "initial": {"base": [1.0, 0.5], "amplitude": [0.2, 0.1], "mode": [1, 0]},
    "seed": 7,
    "kinetic": {"t_end": 0.2, "dt": 0.01, "snapshot_every": 0.1}
  })");
}

std::string error_path(const json& j) {
  try {
    parse_config(j);
  } catch (const ConfigError& e) {
    return e.path();
  }
  return "";
}

}  // namespace

TEST_CASE("format_double round-trips") {
  for (double x : {0.1, 1.0 / 3.0, 1e-300, 12345.678, -2.5e17, 0.0}) CHECK(std::stod(format_double(x)) == x);
  CHECK(format_double(0.5) == "0.5");
}

TEST_CASE("kernel json") {
  const auto k = make_kernel(KernelFamily::exponential, 3.0, 2.0);
  const json j = to_json(k);
  CHECK(j["family"] == "exponential");
  CHECK(kernel_from_json(j) == k);
  CHECK_THROWS_AS(kernel_from_json(json::parse(R"({"family": "gaussian", "amplitude": 1})")), std::invalid_argument);
  CHECK_THROWS_AS(kernel_from_json(json::parse(R"({"family": "gaussian", "amplitude": 1, "range": 1, "x": 0})")),
                  std::invalid_argument);
}

TEST_CASE("field csv") {
  const auto g = make_grid(1, 4.0, 4);
  Field f(g, 0.0);
  f[2] = 1.5;
  std::ostringstream out;
  write_field_csv(out, f);
  CHECK(out.str() == "i0,x0,value\n0,0.5,0\n1,1.5,0\n2,2.5,1.5\n3,3.5,0\n");

  const auto g2 = make_grid(2, 2.0, 2);
  std::ostringstream out2;
  write_density_csv(out2, DensityPair::constant(g2, 1.0, 2.0));
  CHECK(out2.str() == "i0,i1,x0,x1,rho0,rho1\n0,0,0.5,0.5,1,2\n1,0,1.5,0.5,1,2\n0,1,0.5,1.5,1,2\n1,1,1.5,1.5,1,2\n");
}

TEST_CASE("snapshot csv") {
  SimulationResult r;
  ParticleConfig c;
  c.box_length = 5.0;
  c.points[0] = {{1.25, 0.0}};
  c.points[1] = {{2.0, 0.0}, {3.0, 0.0}};
  r.snapshots = {c};
  std::ostringstream out;
  const std::vector<SimulationResult> runs{r};
  const std::vector<double> times{0.0};
  write_snapshot_csv(out, runs, times);
  CHECK(out.str() == "replica,time,type,x\n0,0,0,1.25\n0,0,1,2\n0,0,1,3\n");
}

TEST_CASE("config parses a full document") {
  const RunConfig c = parse_config(base_config());
  REQUIRE(c.model.has_value());
  CHECK(c.model->jump[1].family == KernelFamily::tophat);
  CHECK(c.grid->points[0] == 64);
  CHECK(c.seed == 7);
  CHECK(c.kinetic->dt == 0.01);
  CHECK_NOTHROW(require_task(c, "kinetic"));
  CHECK_THROWS_AS(require_task(c, "meso"), ConfigError);
  const DensityPair rho = make_initial(*c.initial, *c.grid);
  CHECK(rho[0][0] == doctest::Approx(1.0 + 0.2 * std::cos(2.0 * 3.141592653589793 * 0.078125 / 10.0)));
}

TEST_CASE("config errors carry JSON paths") {
  json j = base_config();
  j["model"]["jump"][0]["amplitude"] = -1.0;
  CHECK(error_path(j) == "$.model.jump[0].amplitude");

  j = base_config();
  j["model"]["potential"][1]["colour"] = "red";
  CHECK(error_path(j) == "$.model.potential[1].colour");

  j = base_config();
  j["extra"] = 1;
  CHECK(error_path(j) == "$.extra");

  j = base_config();
  j["grid"].erase("points");
  CHECK(error_path(j) == "$.grid.points");

  j = base_config();
  j["kinetic"]["method"] = "euler";
  CHECK(error_path(j) == "$.kinetic.method");

  j = base_config();
  j["initial"]["amplitude"] = {2.0, 0.0};
  CHECK(error_path(j) == "$.initial.amplitude[0]");

  j = base_config();
  j["seed"] = -3;
  CHECK(error_path(j) == "$.seed");

  j = base_config();
  j["model"]["dimension"] = 3;
  CHECK(error_path(j) == "$.model.dimension");

  j = base_config();
  j["meso"] = {{"epsilons", {1.0, 2.0}}};
  CHECK(error_path(j) == "$.meso.epsilons[1]");

  j = base_config();
  j["bounds"] = {{"theta", 0.0}, {"theta_prime", -1.0}};
  CHECK(error_path(j) == "$.bounds.theta_prime");
}
