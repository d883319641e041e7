// Copyright 2026 The wrdyn Authors
// SPDX-License-Identifier: Apache-2.0

#include "wrdyn/io.hpp"

#include <charconv>
#include <fstream>
#include <ostream>
#include <stdexcept>

namespace wrdyn {

std::string format_double(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

nlohmann::json to_json(const KernelSpec& spec) {
  return {{"family", std::string(to_string(spec.family))}, {"amplitude", spec.amplitude}, {"range", spec.range}};
}

KernelSpec kernel_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw std::invalid_argument("kernel spec must be an object");
  for (const auto& [key, value] : j.items()) {
    if (key != "family" && key != "amplitude" && key != "range") throw std::invalid_argument("unknown kernel key " + key);
  }
  if (!j.contains("family") || !j["family"].is_string()) throw std::invalid_argument("kernel family must be a string");
  if (!j.contains("amplitude") || !j["amplitude"].is_number()) throw std::invalid_argument("kernel amplitude must be a number");
  if (!j.contains("range") || !j["range"].is_number()) throw std::invalid_argument("kernel range must be a number");
  return make_kernel(parse_kernel_family(j["family"].get<std::string>()), j["amplitude"].get<double>(),
                     j["range"].get<double>());
}

nlohmann::json to_json(const ModelParams& model) {
  return {{"dimension", model.dimension},
          {"jump", {to_json(model.jump[0]), to_json(model.jump[1])}},
          {"potential", {to_json(model.potential[0]), to_json(model.potential[1])}},
          {"alpha", model.alpha},
          {"phi_mass", model.phi_mass},
          {"phi_sup", model.phi_sup},
          {"alpha_max", model.alpha_max},
          {"c", model.c}};
}

nlohmann::json to_json(const GridSpec& grid) {
  if (grid.dimension == 1) return {{"dimension", 1}, {"box_length", grid.box_length[0]}, {"points", grid.points[0]}};
  return {{"dimension", 2}, {"box_length", grid.box_length}, {"points", grid.points}};
}

namespace {

void write_cell_prefix(std::ostream& out, const GridSpec& g, std::size_t cell) {
  const auto [i0, i1] = g.unflatten(cell);
  out << i0;
  if (g.dimension == 2) out << ',' << i1;
  out << ',' << format_double(g.coordinate(0, i0));
  if (g.dimension == 2) out << ',' << format_double(g.coordinate(1, i1));
}

void write_header_prefix(std::ostream& out, int d) {
  out << (d == 2 ? "i0,i1,x0,x1" : "i0,x0");
}

}  // namespace

void write_field_csv(std::ostream& out, const Field& field) {
  const GridSpec& g = field.grid();
  write_header_prefix(out, g.dimension);
  out << ",value\n";
  for (std::size_t j = 0; j < field.size(); ++j) {
    write_cell_prefix(out, g, j);
    out << ',' << format_double(field[j]) << '\n';
  }
}

void write_density_csv(std::ostream& out, const DensityPair& rho) {
  const GridSpec& g = rho.grid();
  write_header_prefix(out, g.dimension);
  out << ",rho0,rho1\n";
  for (std::size_t j = 0; j < g.cells(); ++j) {
    write_cell_prefix(out, g, j);
    out << ',' << format_double(rho[0][j]) << ',' << format_double(rho[1][j]) << '\n';
  }
}

void write_snapshot_csv(std::ostream& out, std::span<const SimulationResult> runs, std::span<const double> times) {
  const int d = runs.empty() || runs.front().snapshots.empty() ? 1 : runs.front().snapshots.front().dimension;
  out << (d == 2 ? "replica,time,type,x,y\n" : "replica,time,type,x\n");
  for (std::size_t r = 0; r < runs.size(); ++r) {
    const auto& snaps = runs[r].snapshots;
    if (snaps.size() != times.size()) throw std::invalid_argument("write_snapshot_csv: snapshot count mismatch");
    for (std::size_t s = 0; s < snaps.size(); ++s) {
      for (int t = 0; t < 2; ++t) {
        for (const Vec& p : snaps[s].points[static_cast<std::size_t>(t)]) {
          out << r << ',' << format_double(times[s]) << ',' << t << ',' << format_double(p[0]);
          if (d == 2) out << ',' << format_double(p[1]);
          out << '\n';
        }
      }
    }
  }
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open " + path.string() + " for writing");
  f << text;
  if (!f) throw std::runtime_error("write failed for " + path.string());
}

}  // namespace wrdyn
