// Copyright 2026 The wrdyn Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>

#include <json.hpp>

#include "wrdyn/kinetic.hpp"
#include "wrdyn/particles.hpp"

namespace wrdyn {

/// Shortest round-trip decimal form.
std::string format_double(double x);

nlohmann::json to_json(const KernelSpec& spec);
/// Throws std::invalid_argument on a malformed object.
KernelSpec kernel_from_json(const nlohmann::json& j);
nlohmann::json to_json(const ModelParams& model);
nlohmann::json to_json(const GridSpec& grid);

/// One row per cell: index per axis, coordinate per axis, value.
void write_field_csv(std::ostream& out, const Field& field);
/// Same layout with one value column per component (rho0, rho1).
void write_density_csv(std::ostream& out, const DensityPair& rho);
/// Columns replica, time, type, x[, y].
void write_snapshot_csv(std::ostream& out, std::span<const SimulationResult> runs, std::span<const double> times);

void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace wrdyn
