// Copyright 2026 The wrdyn Authors
// SPDX-License-Identifier: Apache-2.0

// Independent reference computations used by the tests.

#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <vector>

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/special_functions/lambert_w.hpp>

#include "wrdyn/kinetic.hpp"
#include "wrdyn/random.hpp"

namespace oracle {

/// Omega constant, W0(1).
inline double omega() { return boost::math::lambert_w0(1.0); }

/// Root of x e^x = a.
inline double lambert(double a) { return boost::math::lambert_w0(a); }

/// Upper critical value of the chi-square law with `df` degrees of freedom.
inline double chi2_critical(double df, double alpha) {
  return boost::math::quantile(boost::math::complement(boost::math::chi_squared(df), alpha));
}

/// Pearson statistic for counts against bin probabilities (summing to 1).
inline double chi2_statistic(const std::vector<double>& counts, const std::vector<double>& probs) {
  double n = 0.0;
  for (double c : counts) n += c;
  double s = 0.0;
  for (std::size_t k = 0; k < counts.size(); ++k) {
    const double e = n * probs[k];
    s += (counts[k] - e) * (counts[k] - e) / e;
  }
  return s;
}

/// Kolmogorov-Smirnov distance between the sample and a continuous CDF.
inline double ks_statistic(std::vector<double> xs, const std::function<double(double)>& cdf) {
  std::sort(xs.begin(), xs.end());
  const double n = static_cast<double>(xs.size());
  double d = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double f = cdf(xs[i]);
    d = std::max({d, (i + 1) / n - f, f - i / n});
  }
  return d;
}

/// Asymptotic one-sample KS critical distance at level alpha.
inline double ks_critical(std::size_t n, double alpha) {
  return std::sqrt(-0.5 * std::log(alpha / 2.0)) / std::sqrt(static_cast<double>(n));
}

/// Composite Simpson rule with n (even) panels.
inline double simpson(const std::function<double(double)>& f, double a, double b, int n = 2000) {
  if (n % 2) ++n;
  const double h = (b - a) / n;
  double s = f(a) + f(b);
  for (int k = 1; k < n; ++k) s += (k % 2 ? 4.0 : 2.0) * f(a + k * h);
  return s * h / 3.0;
}

/// Smooth positive random field: base + a few low cosine modes, min >= base/4.
inline wrdyn::Field smooth_field(const wrdyn::GridSpec& g, double base, wrdyn::RandomStream& rng, int modes = 3) {
  wrdyn::Field f(g, base);
  std::vector<double> amp(static_cast<std::size_t>(modes));
  std::vector<double> phase(static_cast<std::size_t>(modes));
  double total = 0.0;
  for (int m = 0; m < modes; ++m) {
    amp[static_cast<std::size_t>(m)] = rng.uniform();
    phase[static_cast<std::size_t>(m)] = 2.0 * std::numbers::pi * rng.uniform();
    total += amp[static_cast<std::size_t>(m)];
  }
  const double scale = 0.75 * base / total;
  for (std::size_t j = 0; j < g.cells(); ++j) {
    const auto [i0, i1] = g.unflatten(j);
    const double x = g.coordinate(0, i0) / g.box_length[0];
    const double y = g.dimension == 2 ? g.coordinate(1, i1) / g.box_length[1] : 0.0;
    for (int m = 0; m < modes; ++m)
      f[j] += scale * amp[static_cast<std::size_t>(m)] *
              std::cos(2.0 * std::numbers::pi * (m + 1) * (x + 0.5 * y) + phase[static_cast<std::size_t>(m)]);
  }
  return f;
}

/// Cosine mode cos(2 pi k x / L) along axis 0.
inline wrdyn::Field cosine(const wrdyn::GridSpec& g, int k, double amplitude = 1.0, double offset = 0.0) {
  wrdyn::Field f(g, offset);
  for (std::size_t j = 0; j < g.cells(); ++j) {
    const auto [i0, i1] = g.unflatten(j);
    f[j] += amplitude * std::cos(2.0 * std::numbers::pi * k * g.coordinate(0, i0) / g.box_length[0]);
  }
  return f;
}

/// Projection coefficient of f on cos(2 pi k x / L).
inline double cosine_coefficient(const wrdyn::Field& f, int k) {
  const auto& g = f.grid();
  double s = 0.0;
  for (std::size_t j = 0; j < g.cells(); ++j) {
    const auto [i0, i1] = g.unflatten(j);
    s += f[j] * std::cos(2.0 * std::numbers::pi * k * g.coordinate(0, i0) / g.box_length[0]);
  }
  return 2.0 * s / static_cast<double>(g.cells());
}

}  // namespace oracle
