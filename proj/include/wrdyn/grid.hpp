// Copyright 2026 The wrdyn Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

namespace wrdyn {

/// Periodic grid on the torus [0, L_0) x [0, L_1). Cell j on an axis has its
/// center at (j + 1/2) h. Flat index = i0 + N0 * i1.
struct GridSpec {
  int dimension = 1;
  std::array<double, 2> box_length{1.0, 1.0};
  std::array<int, 2> points{1, 1};

  double spacing(int axis) const { return box_length[axis] / points[axis]; }
  double cell_volume() const;
  std::size_t cells() const;
  double coordinate(int axis, int index) const { return (index + 0.5) * spacing(axis); }
  std::array<int, 2> unflatten(std::size_t flat) const;
  std::size_t flatten(int i0, int i1) const;
  double volume() const;

  bool operator==(const GridSpec&) const = default;
};

/// Validating constructor. In d = 1 the second axis is fixed to one point.
GridSpec make_grid(int dimension, double box_length, int points);
GridSpec make_grid(int dimension, std::array<double, 2> box_length, std::array<int, 2> points);

/// Real field on a periodic grid.
class Field {
 public:
  Field() = default;
  explicit Field(const GridSpec& grid, double value = 0.0) : grid_(grid), values_(grid.cells(), value) {}
  Field(const GridSpec& grid, std::vector<double> values);

  const GridSpec& grid() const { return grid_; }
  std::size_t size() const { return values_.size(); }
  double& operator[](std::size_t i) { return values_[i]; }
  double operator[](std::size_t i) const { return values_[i]; }
  std::span<double> values() { return values_; }
  std::span<const double> values() const { return values_; }

  /// Periodic access with per-axis index wrap.
  double at(int i0, int i1 = 0) const;

  double max() const;
  double min() const;
  double sup_norm() const;
  /// Cell-volume weighted sum.
  double integral() const;

  Field& operator+=(const Field& other);
  Field& operator-=(const Field& other);
  Field& operator*=(double s);

 private:
  GridSpec grid_;
  std::vector<double> values_;
};

Field operator+(Field a, const Field& b);
Field operator-(Field a, const Field& b);
Field operator*(double s, Field a);

void require_same_grid(const GridSpec& a, const GridSpec& b, const char* what);

/// Sup-norm of a - b.
double sup_distance(const Field& a, const Field& b);

}  // namespace wrdyn
