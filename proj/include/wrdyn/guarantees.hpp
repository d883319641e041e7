// Copyright 2026 The wrdyn Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>

#include "wrdyn/kinetic.hpp"

namespace wrdyn {

/// alpha = max_i alpha_i, c = max_i <phi_i>.
struct BanachScaleParams {
  double alpha = 1.0;
  double c = 0.0;
};

BanachScaleParams scale_params(const ModelParams& model);
void validate(const BanachScaleParams& params);

/// T(theta', theta) = (theta' - theta) / (4 alpha) * exp(-c e^{theta'}), theta < theta'.
double horizon_T(double theta_prime, double theta, const BanachScaleParams& params);

/// Positive root of delta e^delta = exp(-theta - log c). Empty when c = 0
/// (the horizon is unbounded).
std::optional<double> delta_theta(double theta, const BanachScaleParams& params);

/// tau(theta) = delta / (4 alpha) * exp(-1 / delta). Empty when c = 0.
std::optional<double> tau_theta(double theta, const BanachScaleParams& params);

/// Maximum of horizon_T(theta', theta) over a uniform scan of theta' in
/// (theta, theta + width].
struct HorizonScan {
  double max_value = 0.0;
  double argmax = 0.0;
};
HorizonScan scan_horizon(double theta, const BanachScaleParams& params, double width, int points);

/// (4 / (e (theta - theta''))) max_i alpha_i exp(<phi_i> e^{theta''}), theta'' < theta.
double operator_norm_bound(double theta, double theta_dd, const ModelParams& model);

}  // namespace wrdyn
