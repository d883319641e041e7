// Copyright 2026 The wrdyn Authors
// SPDX-License-Identifier: Apache-2.0

#include "wrdyn/grid.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "wrdyn/kernels.hpp"

namespace wrdyn {

double GridSpec::cell_volume() const {
  double v = spacing(0);
  if (dimension == 2) v *= spacing(1);
  return v;
}

std::size_t GridSpec::cells() const {
  return dimension == 2 ? static_cast<std::size_t>(points[0]) * static_cast<std::size_t>(points[1])
                        : static_cast<std::size_t>(points[0]);
}

std::array<int, 2> GridSpec::unflatten(std::size_t flat) const {
  const auto n0 = static_cast<std::size_t>(points[0]);
  return {static_cast<int>(flat % n0), static_cast<int>(flat / n0)};
}

std::size_t GridSpec::flatten(int i0, int i1) const {
  return static_cast<std::size_t>(i0) + static_cast<std::size_t>(points[0]) * static_cast<std::size_t>(i1);
}

double GridSpec::volume() const { return dimension == 2 ? box_length[0] * box_length[1] : box_length[0]; }

GridSpec make_grid(int dimension, double box_length, int points) {
  return make_grid(dimension, {box_length, box_length}, {points, points});
}

GridSpec make_grid(int dimension, std::array<double, 2> box_length, std::array<int, 2> points) {
  check_dimension(dimension);
  for (int a = 0; a < dimension; ++a) {
    if (!std::isfinite(box_length[a]) || box_length[a] <= 0.0)
      throw std::invalid_argument("grid box length must be positive");
    if (points[a] <= 0) throw std::invalid_argument("grid point count must be positive");
  }
  GridSpec g;
  g.dimension = dimension;
  g.box_length = box_length;
  g.points = points;
  if (dimension == 1) {
    g.box_length[1] = 1.0;
    g.points[1] = 1;
  }
  return g;
}

Field::Field(const GridSpec& grid, std::vector<double> values) : grid_(grid), values_(std::move(values)) {
  if (values_.size() != grid_.cells()) throw std::invalid_argument("field size does not match grid");
}

double Field::at(int i0, int i1) const {
  const int n0 = grid_.points[0];
  const int n1 = grid_.points[1];
  i0 = ((i0 % n0) + n0) % n0;
  i1 = ((i1 % n1) + n1) % n1;
  return values_[grid_.flatten(i0, i1)];
}

double Field::max() const { return *std::max_element(values_.begin(), values_.end()); }
double Field::min() const { return *std::min_element(values_.begin(), values_.end()); }

double Field::sup_norm() const {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

double Field::integral() const {
  double s = 0.0;
  for (double v : values_) s += v;
  return s * grid_.cell_volume();
}

void require_same_grid(const GridSpec& a, const GridSpec& b, const char* what) {
  if (!(a == b)) throw std::invalid_argument(std::string(what) + ": grid mismatch");
}

Field& Field::operator+=(const Field& other) {
  require_same_grid(grid_, other.grid_, "Field +=");
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += other.values_[i];
  return *this;
}

Field& Field::operator-=(const Field& other) {
  require_same_grid(grid_, other.grid_, "Field -=");
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= other.values_[i];
  return *this;
}

Field& Field::operator*=(double s) {
  for (double& v : values_) v *= s;
  return *this;
}

Field operator+(Field a, const Field& b) { return a += b; }
Field operator-(Field a, const Field& b) { return a -= b; }
Field operator*(double s, Field a) { return a *= s; }

double sup_distance(const Field& a, const Field& b) {
  require_same_grid(a.grid(), b.grid(), "sup_distance");
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace wrdyn
