// Copyright 2026 The wrdyn Authors
// SPDX-License-Identifier: Apache-2.0

#include "wrdyn/stationary.hpp"

#include <algorithm>
#include <boost/math/tools/roots.hpp>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace wrdyn {

namespace {

constexpr double kMarginalBand = 1e-9;

// Bisection on a bracket with a sign change (or an endpoint root).
template <class F>
double bisect_root(F f, double lo, double hi, double rel_tol) {
  const double flo = f(lo);
  const double fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  auto done = [rel_tol](double a, double b) { return std::abs(b - a) <= rel_tol * std::max(std::abs(a), std::abs(b)); };
  boost::uintmax_t max_iter = 400;
  auto [a, b] = boost::math::tools::bisect(f, lo, hi, done, max_iter);
  return 0.5 * (a + b);
}

// Every sign change of f on a uniform scan of [lo, hi], refined by bisection.
template <class F>
std::vector<double> scan_roots(F f, double lo, double hi, const RootScanOptions& opts) {
  std::vector<double> roots;
  const int n = std::max(2, opts.scan_points);
  double x_prev = lo;
  double f_prev = f(lo);
  if (f_prev == 0.0) roots.push_back(lo);
  for (int k = 1; k <= n; ++k) {
    const double x = lo + (hi - lo) * k / n;
    const double fx = f(x);
    if (fx == 0.0) {
      roots.push_back(x);
    } else if (f_prev != 0.0 && std::signbit(fx) != std::signbit(f_prev)) {
      roots.push_back(bisect_root(f, x_prev, x, opts.tolerance));
    }
    x_prev = x;
    f_prev = fx;
  }
  return roots;
}

}  // namespace

std::string_view to_string(Stability s) {
  switch (s) {
    case Stability::stable: return "stable";
    case Stability::unstable: return "unstable";
    case Stability::marginal: return "marginal";
  }
  return "unknown";
}

StabilityVerdict classify_stability(double c0, double c1, const ModelParams& model) {
  StabilityVerdict v;
  v.product = c0 * c1 * model.phi_mass[0] * model.phi_mass[1];
  if (v.product < 1.0 - kMarginalBand)
    v.classification = Stability::stable;
  else if (v.product > 1.0 + kMarginalBand)
    v.classification = Stability::unstable;
  else
    v.classification = Stability::marginal;
  return v;
}

std::vector<RootPair> symmetric_roots(double a, const RootScanOptions& opts) {
  if (!(a > 0.0) || !std::isfinite(a)) throw std::invalid_argument("symmetric_roots: a must be positive");
  auto diag = [a](double x) { return x * std::exp(x) - a; };
  const double xs = bisect_root(diag, 0.0, std::max(1.0, std::log(a) + 2.0), opts.tolerance);
  std::vector<RootPair> roots{{xs, xs}};
  if (a <= std::numbers::e) return roots;

  // Off-diagonal roots: x = a e^{-y} with y e^{a e^{-y}} = a and y > xs.
  auto reduced = [a](double y) { return y * std::exp(a * std::exp(-y)) - a; };
  const double hi = std::max(a, xs + 1.0);
  for (double y : scan_roots(reduced, xs, hi, opts)) {
    if (y <= xs * (1.0 + 1e-9)) continue;
    const double x = a * std::exp(-y);
    roots.push_back({x, y});
    roots.push_back({y, x});
    break;
  }
  return roots;
}

std::vector<StationaryPoint> constant_solutions(double ctilde0, double ctilde1, const ModelParams& model,
                                                const RootScanOptions& opts) {
  if (!(ctilde0 > 0.0) || !(ctilde1 > 0.0)) throw std::invalid_argument("constant_solutions: parameters must be positive");
  const double m0 = model.phi_mass[0];
  const double m1 = model.phi_mass[1];
  // C1 = Ctilde1 exp(-<phi_1> C0) with C0 = Ctilde0 exp(-<phi_0> C1).
  auto c0_of = [=](double c1) { return ctilde0 * std::exp(-m0 * c1); };
  auto residual = [=](double c1) { return c1 - ctilde1 * std::exp(-m1 * c0_of(c1)); };

  std::vector<StationaryPoint> out;
  for (double c1 : scan_roots(residual, 0.0, ctilde1, opts)) {
    StationaryPoint p;
    p.c1 = c1;
    p.c0 = c0_of(c1);
    p.ctilde0 = ctilde0;
    p.ctilde1 = ctilde1;
    const auto verdict = classify_stability(p.c0, p.c1, model);
    p.product = verdict.product;
    p.classification = verdict.classification;
    out.push_back(p);
  }
  return out;
}

double product_hat(double p, double c0, double c1, const ModelParams& model) {
  return c0 * c1 * kernel_fourier(model.potential[0], p, model.dimension) *
         kernel_fourier(model.potential[1], p, model.dimension);
}

std::optional<double> critical_wavenumber(double c0, double c1, const ModelParams& model, double tolerance) {
  auto excess = [&](double p) { return product_hat(p, c0, c1, model) - 1.0; };
  if (excess(0.0) <= 0.0) return std::nullopt;
  const double rel_tol = std::min(tolerance, 1e-14);
  double p_max = 1.0 / std::max(model.potential[0].range, model.potential[1].range);
  int grow = 0;
  while (excess(p_max) >= 0.0) {
    p_max *= 2.0;
    if (++grow > 200) return std::nullopt;
  }
  // Scan for the first crossing; transforms may oscillate (tophat).
  const int n = 10000;
  double prev = 0.0;
  for (int k = 1; k <= n; ++k) {
    const double p = p_max * k / n;
    if (excess(p) <= 0.0) {
      return bisect_root(excess, prev, p, rel_tol);
    }
    prev = p;
  }
  return bisect_root(excess, prev, p_max, rel_tol);
}

DispersionPoint dispersion_growth(double p, double c0, double c1, const ModelParams& model) {
  if (!(p >= 0.0)) throw std::invalid_argument("dispersion_growth: p must be nonnegative");
  const int d = model.dimension;
  const double ph0 = kernel_fourier(model.potential[0], p, d);
  const double ph1 = kernel_fourier(model.potential[1], p, d);
  const double a0 = std::exp(-model.phi_mass[0] * c1) * (kernel_fourier(model.jump[0], p, d) - model.alpha[0]);
  const double a1 = std::exp(-model.phi_mass[1] * c0) * (kernel_fourier(model.jump[1], p, d) - model.alpha[1]);

  DispersionPoint out;
  out.p = p;
  out.product_hat = c0 * c1 * ph0 * ph1;
  out.matrix = {{{a0, c0 * ph0 * a0}, {c1 * ph1 * a1, a1}}};
  out.determinant = a0 * a1 * (1.0 - out.product_hat);

  const double half_trace = 0.5 * (a0 + a1);
  const double disc = 0.25 * (a0 - a1) * (a0 - a1) + out.matrix[0][1] * out.matrix[1][0];
  if (disc < 0.0) {
    out.growth_rates = {half_trace, half_trace};
  } else {
    // Larger-magnitude root first, the other from det / root (no cancellation).
    const double q = half_trace + std::copysign(std::sqrt(disc), half_trace);
    const double r1 = q;
    const double r2 = q != 0.0 ? out.determinant / q : 0.0;
    out.growth_rates = {std::max(r1, r2), std::min(r1, r2)};
  }
  return out;
}

std::array<double, 2> top_eigenvector(const DispersionPoint& point) {
  const auto& m = point.matrix;
  const double lambda = point.growth_rates[0];
  // (m00 - lambda) v0 + m01 v1 = 0
  if (std::abs(m[0][1]) > 0.0) return {1.0, (lambda - m[0][0]) / m[0][1]};
  if (std::abs(m[1][0]) > 0.0) return {(lambda - m[1][1]) / m[1][0], 1.0};
  return m[0][0] >= m[1][1] ? std::array<double, 2>{1.0, 0.0} : std::array<double, 2>{0.0, 1.0};
}

std::array<double, 2> stationary_residual(const DensityPair& rho, const KineticOperator& op, ResidualKind which,
                                          std::optional<std::array<double, 2>> ctilde) {
  if (which == ResidualKind::full) {
    const DensityPair r = op.rhs(rho);
    return {r[0].sup_norm(), r[1].sup_norm()};
  }
  if (!ctilde) throw std::invalid_argument("stationary_residual: birth-and-death residual needs Ctilde parameters");
  const DensityPair image = birth_death_map(rho, *ctilde, op);
  return {sup_distance(rho[0], image[0]), sup_distance(rho[1], image[1])};
}

DensityPair birth_death_map(const DensityPair& rho, const std::array<double, 2>& ctilde, const KineticOperator& op) {
  DensityPair out = rho;
  for (int i = 0; i < 2; ++i) {
    out[i] = op.potential(i).apply(rho[1 - i]);
    for (double& v : out[i].values()) v = ctilde[static_cast<std::size_t>(i)] * std::exp(-v);
  }
  return out;
}

DensityPair perturbation_map(const DensityPair& eps, double c0, double c1, const KineticOperator& op) {
  const std::array<double, 2> c{c0, c1};
  DensityPair out = eps;
  for (int i = 0; i < 2; ++i) {
    out[i] = op.potential(i).apply(eps[1 - i]);
    for (double& v : out[i].values()) v = c[static_cast<std::size_t>(i)] * std::expm1(-v);
  }
  return out;
}

DensityPair frechet_apply(const DensityPair& eps, double c0, double c1, const KineticOperator& op) {
  const std::array<double, 2> c{c0, c1};
  DensityPair out = eps;
  for (int i = 0; i < 2; ++i) {
    out[i] = op.potential(i).apply(eps[1 - i]);
    out[i] *= -c[static_cast<std::size_t>(i)];
  }
  return out;
}

}  // namespace wrdyn
