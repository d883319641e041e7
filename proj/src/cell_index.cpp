// Copyright 2026 The wrdyn Authors
// SPDX-License-Identifier: Apache-2.0

#include "wrdyn/cell_index.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>

namespace wrdyn {

double periodic_distance(const Vec& a, const Vec& b, double box_length, int d) {
  double s = 0.0;
  for (int k = 0; k < d; ++k) {
    double dx = std::abs(a[static_cast<std::size_t>(k)] - b[static_cast<std::size_t>(k)]);
    if (dx > 0.5 * box_length) dx = box_length - dx;
    s += dx * dx;
  }
  return std::sqrt(s);
}

double interaction_cutoff(const KernelSpec& phi, double box_length, int d) {
  const double largest = 0.5 * box_length * std::sqrt(static_cast<double>(d));
  return std::min(kernel_cutoff(phi), largest);
}

CellIndex::CellIndex(double box_length, int d, double cutoff) : box_length_(box_length), d_(d), cutoff_(cutoff) {
  check_dimension(d);
  if (!(box_length > 0.0)) throw std::invalid_argument("CellIndex: box length must be positive");
  n_ = cutoff > 0.0 ? std::max(1, static_cast<int>(std::floor(box_length / cutoff))) : 1;
  // Cap the table size; beyond this the block scan is cheap anyway.
  n_ = std::min(n_, d == 1 ? 1 << 20 : 1 << 10);
  cell_side_ = box_length / n_;
  cells_.assign(d == 1 ? static_cast<std::size_t>(n_) : static_cast<std::size_t>(n_) * static_cast<std::size_t>(n_), {});
}

std::size_t CellIndex::cell_of_point(const Vec& p) const {
  auto axis = [this](double x) { return std::clamp(static_cast<int>(std::floor(x / cell_side_)), 0, n_ - 1); };
  const int i0 = axis(p[0]);
  if (d_ == 1) return static_cast<std::size_t>(i0);
  return static_cast<std::size_t>(i0) + static_cast<std::size_t>(n_) * static_cast<std::size_t>(axis(p[1]));
}

void CellIndex::build(std::span<const Vec> points) {
  for (auto& c : cells_) c.clear();
  cell_of_.resize(points.size());
  slot_of_.resize(points.size());
  for (std::size_t id = 0; id < points.size(); ++id) {
    const std::size_t c = cell_of_point(points[id]);
    cell_of_[id] = c;
    slot_of_[id] = static_cast<std::uint32_t>(cells_[c].size());
    cells_[c].push_back(static_cast<std::uint32_t>(id));
  }
}

void CellIndex::move(std::uint32_t id, const Vec& to) {
  const std::size_t from = cell_of_[id];
  const std::size_t dest = cell_of_point(to);
  if (from == dest) return;
  auto& src = cells_[from];
  const std::uint32_t slot = slot_of_[id];
  const std::uint32_t last = src.back();
  src[slot] = last;
  slot_of_[last] = slot;
  src.pop_back();
  slot_of_[id] = static_cast<std::uint32_t>(cells_[dest].size());
  cells_[dest].push_back(id);
  cell_of_[id] = dest;
}

double CellIndex::interaction_sum(const Vec& y, std::span<const Vec> points, const KernelSpec& phi) const {
  if (cutoff_ <= 0.0 || points.empty()) return 0.0;
  thread_local std::vector<std::pair<std::uint32_t, double>> hits;
  hits.clear();
  auto visit = [&](std::size_t cell) {
    for (std::uint32_t id : cells_[cell]) {
      const double r = periodic_distance(y, points[id], box_length_, d_);
      if (r <= cutoff_) hits.emplace_back(id, kernel_eval(phi, r));
    }
  };
  if (n_ < 3) {
    for (std::size_t c = 0; c < cells_.size(); ++c) visit(c);
  } else {
    const auto home = cell_of_point(y);
    const int h0 = static_cast<int>(home % static_cast<std::size_t>(n_));
    const int h1 = static_cast<int>(home / static_cast<std::size_t>(n_));
    const int span1 = d_ == 2 ? 1 : 0;
    for (int o1 = -span1; o1 <= span1; ++o1) {
      const int c1 = (h1 + o1 + n_) % n_;
      for (int o0 = -1; o0 <= 1; ++o0) {
        const int c0 = (h0 + o0 + n_) % n_;
        visit(static_cast<std::size_t>(c0) + static_cast<std::size_t>(n_) * static_cast<std::size_t>(c1));
      }
    }
  }
  std::sort(hits.begin(), hits.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  double s = 0.0;
  for (const auto& [id, v] : hits) s += v;
  return s;
}

double brute_force_interaction(const Vec& y, std::span<const Vec> points, const KernelSpec& phi, double box_length,
                               int d, double cutoff) {
  if (cutoff <= 0.0) return 0.0;
  double s = 0.0;
  for (const Vec& z : points) {
    const double r = periodic_distance(y, z, box_length, d);
    if (r <= cutoff) s += kernel_eval(phi, r);
  }
  return s;
}

}  // namespace wrdyn
