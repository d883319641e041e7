// Copyright 2026 The wrdyn Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "wrdyn/kernels.hpp"

namespace wrdyn {

/// Minimum-image distance on the torus [0, L)^d.
double periodic_distance(const Vec& a, const Vec& b, double box_length, int d);

/// Interaction range used by the simulator: the kernel cutoff, capped at the
/// largest minimum-image distance of the box.
double interaction_cutoff(const KernelSpec& phi, double box_length, int d);

/// Uniform spatial hash of one particle type with cell side >= cutoff, so the
/// 3^d block around a query point covers every particle within the cutoff.
class CellIndex {
 public:
  CellIndex() = default;
  CellIndex(double box_length, int d, double cutoff);

  void build(std::span<const Vec> points);
  /// Re-files particle `id` after its position changed to `to`.
  void move(std::uint32_t id, const Vec& to);

  int cells_per_axis() const { return n_; }
  std::size_t cell_of(std::uint32_t id) const { return cell_of_[id]; }
  std::size_t cell_of_point(const Vec& p) const;
  const std::vector<std::uint32_t>& members(std::size_t cell) const { return cells_[cell]; }

  /// Sum over indexed particles z with |y - z| <= cutoff of phi(|y - z|),
  /// accumulated in ascending particle id so it matches brute_force_interaction bit for bit.
  double interaction_sum(const Vec& y, std::span<const Vec> points, const KernelSpec& phi) const;

 private:
  double box_length_ = 1.0;
  int d_ = 1;
  double cutoff_ = 0.0;
  int n_ = 1;
  double cell_side_ = 1.0;
  std::vector<std::vector<std::uint32_t>> cells_;
  std::vector<std::size_t> cell_of_;
  std::vector<std::uint32_t> slot_of_;
};

/// O(N) reference for CellIndex::interaction_sum.
double brute_force_interaction(const Vec& y, std::span<const Vec> points, const KernelSpec& phi, double box_length,
                               int d, double cutoff);

}  // namespace wrdyn
