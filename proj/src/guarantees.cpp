// Copyright 2026 The wrdyn Authors
// SPDX-License-Identifier: Apache-2.0

#include "wrdyn/guarantees.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace wrdyn {

BanachScaleParams scale_params(const ModelParams& model) { return {model.alpha_max, model.c}; }

void validate(const BanachScaleParams& params) {
  if (!(params.alpha > 0.0) || !std::isfinite(params.alpha)) throw std::invalid_argument("alpha must be positive");
  if (!(params.c >= 0.0) || !std::isfinite(params.c)) throw std::invalid_argument("c must be nonnegative");
}

double horizon_T(double theta_prime, double theta, const BanachScaleParams& params) {
  validate(params);
  if (!(theta < theta_prime)) throw std::invalid_argument("horizon_T: requires theta < theta_prime");
  return (theta_prime - theta) / (4.0 * params.alpha) * std::exp(-params.c * std::exp(theta_prime));
}

std::optional<double> delta_theta(double theta, const BanachScaleParams& params) {
  validate(params);
  if (params.c == 0.0) return std::nullopt;
  // Solve u + e^u = log r for u = log delta; the left side is increasing.
  const double log_r = -theta - std::log(params.c);
  double lo = 0.0;
  double hi = 0.0;
  if (log_r <= 1.0) {
    lo = log_r - 1.0;
    hi = log_r;
  } else {
    lo = 0.0;
    hi = std::log(log_r);
  }
  auto h = [log_r](double u) { return u + std::exp(u) - log_r; };
  for (int it = 0; it < 400 && hi - lo > 1e-16 * std::max(1.0, std::abs(lo)); ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    (h(mid) < 0.0 ? lo : hi) = mid;
  }
  return std::exp(0.5 * (lo + hi));
}

std::optional<double> tau_theta(double theta, const BanachScaleParams& params) {
  const auto delta = delta_theta(theta, params);
  if (!delta) return std::nullopt;
  return *delta / (4.0 * params.alpha) * std::exp(-1.0 / *delta);
}

HorizonScan scan_horizon(double theta, const BanachScaleParams& params, double width, int points) {
  if (!(width > 0.0) || points < 1) throw std::invalid_argument("scan_horizon: need width > 0 and points >= 1");
  HorizonScan best;
  for (int k = 1; k <= points; ++k) {
    const double tp = theta + width * k / points;
    const double v = horizon_T(tp, theta, params);
    if (v > best.max_value) best = {v, tp};
  }
  return best;
}

double operator_norm_bound(double theta, double theta_dd, const ModelParams& model) {
  if (!(theta_dd < theta)) throw std::invalid_argument("operator_norm_bound: requires theta'' < theta");
  double m = 0.0;
  for (int i = 0; i < 2; ++i)
    m = std::max(m, model.alpha[static_cast<std::size_t>(i)] *
                        std::exp(model.phi_mass[static_cast<std::size_t>(i)] * std::exp(theta_dd)));
  return 4.0 / (std::numbers::e * (theta - theta_dd)) * m;
}

}  // namespace wrdyn
